#pragma once

#include <optional>
#include <span>
#include <vector>

#include "matterwave/amplitude_state.hpp"
#include "matterwave/config.hpp"
#include "matterwave/solver.hpp"
#include "matterwave/wave_packet.hpp"

namespace matterwave {

/// Contiguous run of initial momenta p_j = j / S prepared in one internal state.
struct InputBlock {
    InternalState state = InternalState::Ground;
    int first = 0;
    int count = 0;

    int last() const noexcept { return first + count - 1; }
    bool contains(int index) const noexcept { return index >= first && index < first + count; }

    /// Samples in the half-open momentum range [lo, hi).
    static InputBlock covering(double lo, double hi, int samples_per_hbark, InternalState state);
    /// Samples in the diffraction-order window [m - 1/2, m + 1/2).
    static InputBlock order(int m, int samples_per_hbark, InternalState state);
};

/// Final amplitudes of one initial momentum eigenstate.
class ColumnView {
public:
    ColumnView(std::span<const cplx> data, int n_store, bool has_excited)
        : data_(data), n_store_(n_store), has_excited_(has_excited) {}

    /// Amplitude <s_f, p_i + n hbar K | pulse | s_i, p_i>, zero beyond storage.
    cplx amplitude(InternalState s_f, int n) const;
    double probability(InternalState s_f, int n) const { return std::norm(amplitude(s_f, n)); }
    double norm() const;
    int n_store() const noexcept { return n_store_; }

private:
    std::span<const cplx> data_;
    int n_store_;
    bool has_excited_;
};

/// Transition function G(p_f, p_i) of one calibrated pulse on a momentum
/// grid. Quasi-momentum is conserved, so each initial sample p_i owns one
/// column with entries at p_f = p_i + n hbar K for n in [-n_store, n_store].
class TransitionFunction {
public:
    struct Block {
        InputBlock input;
        /// count x (internal states) x (2 n_store + 1)
        std::vector<cplx> amplitudes;
        std::vector<int> n_max_used;
        std::vector<double> truncation_difference;
    };

    TransitionFunction(DiffractionConfig config, SolverSettings settings, int samples_per_hbark,
                       int n_store, std::vector<Block> blocks);

    /// Identity pulse on the given inputs (area zero), built without solving.
    static TransitionFunction identity(const DiffractionConfig& config, int samples_per_hbark,
                                       std::span<const InputBlock> inputs);

    const DiffractionConfig& config() const noexcept { return config_; }
    const SolverSettings& settings() const noexcept { return settings_; }
    PulseKind pulse_kind() const { return classify_pulse_area(config_.pulse_area); }
    int samples_per_hbark() const noexcept { return samples_; }
    double spacing() const noexcept { return 1.0 / samples_; }
    double momentum(int index) const noexcept { return static_cast<double>(index) / samples_; }
    int n_store() const noexcept { return n_store_; }
    bool has_excited() const noexcept { return config_.has_excited_state(); }
    const std::vector<Block>& blocks() const noexcept { return blocks_; }

    /// Largest truncation order used by any column.
    int n_max_used() const;
    /// Largest truncation difference reported by any column.
    double max_truncation_difference() const;

    std::optional<ColumnView> column(int index, InternalState s_i) const;
    /// Column or GridError if the input is not part of the domain.
    ColumnView require_column(int index, InternalState s_i) const;

    /// G(p_f = p_i + n hbar K, p_i) element for given internal states.
    cplx element(int input_index, InternalState s_i, InternalState s_f, int n) const;

private:
    DiffractionConfig config_;
    SolverSettings settings_;
    int samples_;
    int n_store_;
    std::vector<Block> blocks_;
};

struct BuildOptions {
    unsigned threads = 0;
};

/// Solves one converged ladder evolution per input sample. Deterministic.
/// Solver errors are rethrown with the offending p_i in the message.
TransitionFunction build_transition(const DiffractionConfig& config, const SolverSettings& settings,
                                    int samples_per_hbark, std::span<const InputBlock> inputs,
                                    const BuildOptions& options = {});

/// psi_f(p_i + n hbar K) = sum G(p_i + n hbar K, p_i) psi_i(p_i), summed over
/// input internal states. Throws GridError on mismatched spacing or when
/// psi has support outside the transition function's domain.
WavePacket apply(const TransitionFunction& g, const WavePacket& psi);

}  // namespace matterwave
