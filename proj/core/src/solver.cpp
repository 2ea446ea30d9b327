#include "matterwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "matterwave/dormand_prince.hpp"
#include "matterwave/error.hpp"
#include "matterwave/ladder.hpp"

namespace matterwave {

void SolverSettings::validate() const {
    if (!(abs_tol > 0.0) || !(abs_tol <= rel_tol) || !(rel_tol < 1.0)) {
        throw ConfigError("solver", "tolerances must satisfy 0 < abs_tol <= rel_tol < 1");
    }
    if (max_step && !(*max_step > 0.0)) throw ConfigError("max_step", "must be positive");
    if (convergence_norm_tol && !(*convergence_norm_tol > 0.0)) {
        throw ConfigError("convergence_norm_tol", "must be positive");
    }
}

SolverSettings SolverSettings::scaled(double factor) const {
    SolverSettings s = *this;
    s.rel_tol *= factor;
    s.abs_tol *= factor;
    if (!convergence_norm_tol) s.convergence_norm_tol = rel_tol;
    return s;
}

namespace {

AmplitudeState run(const AmplitudeState& initial, const DiffractionConfig& config,
                   const SolverSettings& settings, bool reversed, SolveStats* stats) {
    config.validate();
    settings.validate();
    if (!config.n_max) throw ConfigError("n_max", "evolve needs an explicit truncation order");
    if (*config.n_max != initial.n_max()) {
        throw ConfigError("n_max", "does not match the ladder size of the initial state");
    }
    if (initial.has_excited() != config.has_excited_state()) {
        throw ConfigError("state", "internal-state structure does not match the mechanism");
    }

    AmplitudeState state = initial;
    if (config.pulse_area == 0.0) return state;

    const LadderSystem system(config, initial.quasi_momentum(), initial.n_max(), reversed);
    const double t0 = config.t_start();
    const double t1 = config.t_end();
    const double scale = config.envelope == EnvelopeShape::Gaussian ? config.delta_tau
                                                                    : 0.5 * config.delta_tau;
    StepControl control{settings.rel_tol, settings.abs_tol, config.delta_tau / 100.0,
                        settings.max_step.value_or(scale / 4.0)};
    const IntegrationOutcome outcome = integrate_dopri5(system, t0, t1, state.data(), control);
    if (stats) {
        stats->accepted += outcome.accepted;
        stats->rejected += outcome.rejected;
        stats->rhs_evaluations += outcome.rhs_evaluations;
    }
    switch (outcome.status) {
        case IntegrationOutcome::Status::Ok: break;
        case IntegrationOutcome::Status::StepUnderflow:
            throw SolverError("step size underflow", outcome.t, state.norm());
        case IntegrationOutcome::Status::NonFinite:
            throw SolverError("non-finite amplitudes", outcome.t, state.norm());
    }
    return state;
}

}  // namespace

AmplitudeState evolve(const AmplitudeState& initial, const DiffractionConfig& config,
                      const SolverSettings& settings, SolveStats* stats) {
    return run(initial, config, settings, false, stats);
}

AmplitudeState evolve_reversed(const AmplitudeState& initial, const DiffractionConfig& config,
                               const SolverSettings& settings, SolveStats* stats) {
    return run(initial, config, settings, true, stats);
}

ConvergedState evolve_converged(const AmplitudeState& initial, const DiffractionConfig& config,
                                const SolverSettings& settings, SolveStats* stats) {
    if (config.n_max) {
        return {evolve(initial.resized(*config.n_max), config, settings, stats), *config.n_max, 0.0};
    }
    const double tol = settings.convergence_tol();
    DiffractionConfig trial = config;
    int order = std::max(kMinAutoOrder, initial.n_max());
    trial.n_max = order;
    AmplitudeState current = evolve(initial.resized(order), trial, settings, stats);
    double diff = 0.0;
    for (; order < kMaxAutoOrder; ++order) {
        trial.n_max = order + 1;
        AmplitudeState next = evolve(initial.resized(order + 1), trial, settings, stats);
        diff = AmplitudeState::max_difference(current, next);
        if (diff <= tol) return {std::move(current), order, diff};
        current = std::move(next);
    }
    std::ostringstream msg;
    msg << "truncation did not converge by n_max=" << kMaxAutoOrder << " (last difference " << diff
        << ", tolerance " << tol << "); parameters are deep in the Raman-Nath regime";
    throw ConvergenceError(msg.str(), diff, order);
}

}  // namespace matterwave
