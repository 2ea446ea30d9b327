#pragma once

#include <optional>

#include "matterwave/amplitude_state.hpp"
#include "matterwave/config.hpp"

namespace matterwave {

/// Tolerances of the adaptive integrator and of the truncation test.
struct SolverSettings {
    double rel_tol = 1e-3;
    double abs_tol = 1e-6;
    /// Largest step; defaults to delta_tau / 4 so the pulse is never skipped.
    std::optional<double> max_step;
    /// Max-norm threshold between consecutive truncation orders; defaults to
    /// rel_tol.
    std::optional<double> convergence_norm_tol;

    void validate() const;
    double convergence_tol() const noexcept { return convergence_norm_tol.value_or(rel_tol); }
    /// Both tolerances scaled by `factor` (convergence threshold kept).
    SolverSettings scaled(double factor) const;
};

struct SolveStats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evaluations = 0;
};

/// Smallest and largest truncation order tried by evolve_converged.
inline constexpr int kMinAutoOrder = 3;
inline constexpr int kMaxAutoOrder = 32;

/// Integrates `initial` across the pulse window with the Dormand-Prince 5(4)
/// pair. `config.n_max`, when explicit, must equal `initial.n_max()`.
/// Throws SolverError on step-size underflow or a non-finite state.
AmplitudeState evolve(const AmplitudeState& initial, const DiffractionConfig& config,
                      const SolverSettings& settings, SolveStats* stats = nullptr);

/// Integrates the inverse pulse: time-mirrored envelope with conjugated
/// couplings. evolve_reversed(evolve(x)) == x up to solver tolerance.
AmplitudeState evolve_reversed(const AmplitudeState& initial, const DiffractionConfig& config,
                               const SolverSettings& settings, SolveStats* stats = nullptr);

struct ConvergedState {
    AmplitudeState state;
    int n_max_used;
    /// Max-norm difference to the n_max_used + 1 solution.
    double truncation_difference;
};

/// Raises the truncation order from kMinAutoOrder until consecutive solves
/// agree to `settings.convergence_tol()`. An explicit `config.n_max` is used
/// as-is (single solve, no test). Throws ConvergenceError past kMaxAutoOrder.
ConvergedState evolve_converged(const AmplitudeState& initial, const DiffractionConfig& config,
                                const SolverSettings& settings, SolveStats* stats = nullptr);

}  // namespace matterwave
