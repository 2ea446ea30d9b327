#pragma once

#include <optional>
#include <span>
#include <vector>

#include "matterwave/config.hpp"
#include "matterwave/intervals.hpp"
#include "matterwave/solver.hpp"
#include "matterwave/transition.hpp"
#include "matterwave/wave_packet.hpp"

namespace matterwave {

class TransitionCache;

/// Grid, tolerances and execution resources shared by all diagnostics.
struct AnalysisOptions {
    int samples_per_hbark = 256;
    SolverSettings solver;
    unsigned threads = 0;
    /// Gaussian packets are sampled within +- cutoff * delta_p.
    double packet_cutoff = 6.0;
    /// Optional transition-function cache (not owned).
    TransitionCache* cache = nullptr;
};

/// Diffraction order and internal state of the prepared input relative to p0.
struct Preparation {
    int order = 0;
    InternalState state = InternalState::Ground;
};

/// Mirrors in double geometry start at -hbar K; everything else at p0.
/// A double Raman mirror starts in |e>, the only state whose -hbar K
/// neighbour lies on the resonant g/e ladder.
Preparation default_preparation(const DiffractionConfig& config);

/// Internal state reached from `input` after a transfer of `orders` hbar K.
InternalState state_after(Mechanism mechanism, InternalState input, int orders);

/// [p0 + 1/2, p0 + 3/2].
IntervalSet efficiency_target(double p0);
/// Loss integration interval of a beam splitter or mirror, shifted by p0.
IntervalSet loss_interval(Geometry geometry, PulseKind kind, double p0);

/// Builds (or loads from the cache) the transition function on `inputs`.
TransitionFunction obtain_transition(const DiffractionConfig& config, std::span<const InputBlock> inputs,
                                     const AnalysisOptions& options);

struct DiffractionResult {
    WavePacket initial;
    WavePacket final;
    int n_max_used = 0;
    double truncation_difference = 0.0;
};

/// Propagates a Gaussian packet of width delta_p centred at p0 + order.
DiffractionResult diffract(const DiffractionConfig& config, double delta_p, const AnalysisOptions& options,
                           std::optional<Preparation> preparation = std::nullopt);

struct ScalarResult {
    double value = 0.0;
    int n_max_used = 0;
    double truncation_difference = 0.0;
};

/// Probability inside `target` (default efficiency_target(p0)), both
/// internal states.
ScalarResult efficiency(const DiffractionConfig& config, double delta_p, const AnalysisOptions& options,
                        std::optional<IntervalSet> target = std::nullopt,
                        std::optional<Preparation> preparation = std::nullopt);

/// 1 - probability inside loss_interval(geometry, kind, p0).
ScalarResult losses(const DiffractionConfig& config, double delta_p, PulseKind kind,
                    const AnalysisOptions& options);

struct Populations {
    double minus = 0.0;  ///< [p0 - 3/2, p0 - 1/2]
    double zero = 0.0;   ///< [p0 - 1/2, p0 + 1/2]
    double plus = 0.0;   ///< [p0 + 1/2, p0 + 3/2]
    double other = 0.0;  ///< everything outside [p0 - 3/2, p0 + 3/2]
    int n_max_used = 0;
    double truncation_difference = 0.0;

    double total() const noexcept { return minus + zero + plus + other; }
};

Populations populations(const DiffractionConfig& config, double delta_p, const AnalysisOptions& options);

enum class WidthMode {
    AllPeaks,     ///< outermost half-maximum crossings
    CentralPeak,  ///< crossings around the global maximum only
};

/// Which matrix element defines the resonance curve.
enum class TransferPath {
    Auto,        ///< SingleStep for single, DoubleStep for double geometry
    SingleStep,  ///< |G(p + hbar K, p)|^2
    DoubleStep,  ///< |G(p + hbar K, p - hbar K)|^2
};

struct FwhmResult {
    double width = 0.0;
    double peak = 0.0;
    double peak_position = 0.0;
    /// A half-maximum crossing was not found inside the sampled range.
    bool truncated = false;
};

/// Full width at half maximum of sampled y(x), x strictly increasing,
/// with linear interpolation of the crossings. Throws AnalysisError if the
/// maximum is below `min_peak`.
FwhmResult fwhm(std::span<const double> x, std::span<const double> y, WidthMode mode = WidthMode::AllPeaks,
                double min_peak = 1e-6);

struct WidthOptions {
    WidthMode mode = WidthMode::AllPeaks;
    TransferPath path = TransferPath::Auto;
    /// Half-width of the scanned momentum range; automatic when unset.
    std::optional<double> half_range;
    /// Samples per hbar K of the refinement pass.
    int fine_samples = 1024;
};

/// Transfer probability curve of `path` at the given momenta p, in the
/// default preparation state.
std::vector<double> resonance_curve(const DiffractionConfig& config, std::span<const double> momenta,
                                    const AnalysisOptions& options, TransferPath path = TransferPath::Auto,
                                    int* n_max_used = nullptr, double* truncation_difference = nullptr);

struct WidthResult {
    FwhmResult fwhm;
    int n_max_used = 0;
    double truncation_difference = 0.0;
    int evaluations = 0;
};

/// Resonance width: FWHM in p (around p0) of the resonance curve. A coarse
/// scan locates the structure above 30% of the maximum, which is then
/// resampled at `fine_samples` per hbar K.
WidthResult resonance_width(const DiffractionConfig& config, const AnalysisOptions& options,
                            const WidthOptions& width_options = {});

struct OptimalArea {
    double area = 0.0;
    /// Transfer probability |p0> -> |p0 + hbar K> at `area`.
    double transfer = 0.0;
    int evaluations = 0;
};

/// Area in [pi/2, 3pi/2] maximizing the eigenstate transfer p0 -> p0 + hbar K,
/// with the resonance detuning of p0 and the single-diffraction area
/// convention applied. 64-point scan, then golden section to 1e-3 rad.
/// Throws AnalysisError when the objective is flat.
OptimalArea optimal_pulse_area(const DiffractionConfig& config, const AnalysisOptions& options);

/// `config` tuned to p0: resonance detuning, single-diffraction area
/// convention and the optimal area.
DiffractionConfig tuned_mirror(const DiffractionConfig& config, double p0, const AnalysisOptions& options,
                               OptimalArea* optimum = nullptr);

struct TransitionScan {
    std::vector<double> p0;
    std::vector<double> delta_p;
    std::vector<double> optimal_area;  ///< per p0
    std::vector<double> width;         ///< per p0, single-step resonance width
    std::vector<double> efficiency;    ///< row-major [p0][delta_p]
    std::vector<int> n_max_used;       ///< per p0
    std::vector<double> truncation_difference;  ///< per p0

    double at(std::size_t i_p0, std::size_t i_dp) const { return efficiency[i_p0 * delta_p.size() + i_dp]; }
};

/// Efficiency map of tuned mirrors over (p0, delta_p): Gaussian inputs at
/// p0 in |g>, target [p0 + 1/2, p0 + 3/2].
TransitionScan transition_scan(const DiffractionConfig& config, std::span<const double> p0_grid,
                               std::span<const double> delta_p_grid, const AnalysisOptions& options);

}  // namespace matterwave
