#pragma once

#include <array>
#include <span>
#include <vector>

#include "matterwave/analysis.hpp"
#include "matterwave/intervals.hpp"
#include "matterwave/transition.hpp"
#include "matterwave/wave_packet.hpp"

namespace matterwave {

/// One pulse of an interferometer arm: after the pulse only component
/// `output_state` inside `window` is kept.
struct ArmStep {
    PulseKind pulse = PulseKind::BeamSplitter;
    InternalState input_state = InternalState::Ground;
    InternalState output_state = InternalState::Ground;
    IntervalSet window;
};

/// Beam splitter, mirror, beam splitter.
struct ArmSpec {
    std::array<ArmStep, 3> steps;

    /// Throws ConfigError when consecutive steps do not chain.
    void validate() const;
};

struct ArmPair {
    ArmSpec upper;
    ArmSpec lower;
};

/// The two main arms of a Mach-Zehnder sequence for a packet at p0 = 0.
/// Single: 0 -> +1 -> 0 -> 0 and 0 -> 0 -> +1 -> 0.
/// Double: 0 -> +1 -> -1 -> 0 and 0 -> -1 -> +1 -> 0.
ArmPair main_arms(Mechanism mechanism, Geometry geometry);

/// Pulse sequence BS, M, BS sharing everything but the area.
struct PulseSequence {
    DiffractionConfig beam_splitter;
    DiffractionConfig mirror;

    /// Nominal pi/2 and pi areas of `config`'s geometry convention.
    static PulseSequence from(const DiffractionConfig& config);
    const DiffractionConfig& for_step(int k) const { return k == 1 ? mirror : beam_splitter; }
};

/// Applies the three pulses in order, keeping only the designated block
/// after each. `pulses[k]` must cover the packet's support before step k.
WavePacket propagate_arm(const WavePacket& psi, const ArmSpec& arm,
                         std::span<const TransitionFunction, 3> pulses);

struct InterferogramResult {
    std::vector<double> phases;
    std::vector<double> intensities;
    double amplitude = 0.0;
    double contrast = 0.0;
    /// Least-squares fit I = c0 + c1 cos + c2 sin; RMS residual over amplitude.
    double fit_residual = 0.0;
    double fit_phase = 0.0;
    int n_max_used = 0;
    double truncation_difference = 0.0;
};

/// Exit-port intensity I(phi) = int_exit |psi_up e^{i phi} + psi_low|^2 for
/// phi_k = 2 pi k / (N - 1); A = max + min, C = (max - min) / A.
/// Throws AnalysisError when A < 1e-9.
InterferogramResult interferogram(const WavePacket& upper, const WavePacket& lower, const IntervalSet& exit_window,
                                  int phase_samples);

/// Full Mach-Zehnder signal for a Gaussian packet of width delta_p at p0 = 0.
InterferogramResult signal(const DiffractionConfig& config, double delta_p, int phase_samples,
                           const AnalysisOptions& options);

/// Same with explicit pulses (for custom areas or identity pulses).
InterferogramResult signal(const PulseSequence& pulses, double delta_p, int phase_samples,
                           const AnalysisOptions& options);

struct InterferometerMap {
    std::vector<double> delta_p;
    std::vector<double> delta_tau;
    std::vector<double> amplitude;  ///< row-major [delta_p][delta_tau]
    std::vector<double> contrast;
    std::vector<int> n_max_used;

    std::size_t index(std::size_t i_dp, std::size_t i_tau) const { return i_dp * delta_tau.size() + i_tau; }
};

/// `signal` over a (delta_p, delta_tau) grid. Cells with a degenerate
/// signal report A = 0 and C = NaN.
InterferometerMap interferometer_map(const DiffractionConfig& config, std::span<const double> delta_p_grid,
                                     std::span<const double> delta_tau_grid, int phase_samples,
                                     const AnalysisOptions& options);

}  // namespace matterwave
