#include "matterwave/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "matterwave/error.hpp"
#include "matterwave/parallel.hpp"
#include "matterwave/pulse.hpp"
#include "matterwave/transition_io.hpp"
#include "matterwave/units.hpp"

namespace matterwave {

namespace {

constexpr double kPi = constants::pi;

double transfer_probability(const AmplitudeState& s, int orders) {
    if (std::abs(orders) > s.n_max()) return 0.0;
    double p = s.population(InternalState::Ground, orders);
    if (s.has_excited()) p += s.population(InternalState::Excited, orders);
    return p;
}

ConvergedState solve_eigenstate(const DiffractionConfig& config, double p, InternalState state,
                                const SolverSettings& settings) {
    const int order = config.n_max.value_or(kMinAutoOrder);
    return evolve_converged(AmplitudeState::eigenstate(config.mechanism, order, p, state, 0), config, settings);
}

InputBlock packet_domain(const WavePacket& packet, InternalState state) {
    return {state, packet.first_index(), packet.size()};
}

}  // namespace

Preparation default_preparation(const DiffractionConfig& config) {
    if (config.geometry == Geometry::Double && classify_pulse_area(config.pulse_area) == PulseKind::Mirror) {
        const InternalState s = config.has_excited_state() ? InternalState::Excited : InternalState::Ground;
        return {-1, s};
    }
    return {0, InternalState::Ground};
}

InternalState state_after(Mechanism mechanism, InternalState input, int orders) {
    if (mechanism == Mechanism::Bragg || orders % 2 == 0) return input;
    return input == InternalState::Ground ? InternalState::Excited : InternalState::Ground;
}

IntervalSet efficiency_target(double p0) { return IntervalSet{{p0 + 0.5, p0 + 1.5}}; }

IntervalSet loss_interval(Geometry geometry, PulseKind kind, double p0) {
    if (kind == PulseKind::Custom) {
        throw ConfigError("pulse_kind", "loss interval is defined for beam splitters and mirrors only");
    }
    if (geometry == Geometry::Single) return IntervalSet{{p0 - 0.5, p0 + 1.5}};
    if (kind == PulseKind::BeamSplitter) return IntervalSet{{p0 - 1.5, p0 + 1.5}};
    return IntervalSet{{p0 - 1.5, p0 - 0.5}, {p0 + 0.5, p0 + 1.5}};
}

TransitionFunction obtain_transition(const DiffractionConfig& config, std::span<const InputBlock> inputs,
                                     const AnalysisOptions& options) {
    const BuildOptions build{options.threads};
    if (options.cache != nullptr) {
        return options.cache->get_or_build(config, options.solver, options.samples_per_hbark, inputs, build);
    }
    return build_transition(config, options.solver, options.samples_per_hbark, inputs, build);
}

DiffractionResult diffract(const DiffractionConfig& config, double delta_p, const AnalysisOptions& options,
                           std::optional<Preparation> preparation) {
    config.validate();
    const Preparation prep = preparation.value_or(default_preparation(config));
    WavePacket initial = WavePacket::gaussian(config.p0 + prep.order, delta_p, options.samples_per_hbark,
                                              prep.state, config.has_excited_state(), options.packet_cutoff);
    const InputBlock domain = packet_domain(initial, prep.state);
    const TransitionFunction g = obtain_transition(config, std::span(&domain, 1), options);
    WavePacket final_packet = apply(g, initial);
    return {std::move(initial), std::move(final_packet), g.n_max_used(), g.max_truncation_difference()};
}

ScalarResult efficiency(const DiffractionConfig& config, double delta_p, const AnalysisOptions& options,
                        std::optional<IntervalSet> target, std::optional<Preparation> preparation) {
    const DiffractionResult r = diffract(config, delta_p, options, preparation);
    const IntervalSet set = target.value_or(efficiency_target(config.p0));
    return {r.final.integrate(set), r.n_max_used, r.truncation_difference};
}

ScalarResult losses(const DiffractionConfig& config, double delta_p, PulseKind kind,
                    const AnalysisOptions& options) {
    const IntervalSet set = loss_interval(config.geometry, kind, config.p0);
    const DiffractionResult r = diffract(config, delta_p, options);
    return {std::clamp(1.0 - r.final.integrate(set), 0.0, 1.0), r.n_max_used, r.truncation_difference};
}

Populations populations(const DiffractionConfig& config, double delta_p, const AnalysisOptions& options) {
    const DiffractionResult r = diffract(config, delta_p, options);
    const double p0 = config.p0;
    const WavePacket& f = r.final;
    Populations out;
    out.minus = f.integrate(IntervalSet{{p0 - 1.5, p0 - 0.5}});
    out.zero = f.integrate(IntervalSet{{p0 - 0.5, p0 + 0.5}});
    out.plus = f.integrate(IntervalSet{{p0 + 0.5, p0 + 1.5}});
    const double lo = f.momentum(f.first_index()) - f.spacing();
    const double hi = f.momentum(f.last_index()) + f.spacing();
    std::vector<Interval> rest;
    if (lo < p0 - 1.5) rest.push_back({lo, p0 - 1.5});
    if (hi > p0 + 1.5) rest.push_back({p0 + 1.5, hi});
    out.other = rest.empty() ? 0.0 : f.integrate(IntervalSet(std::move(rest)));
    out.n_max_used = r.n_max_used;
    out.truncation_difference = r.truncation_difference;
    return out;
}

FwhmResult fwhm(std::span<const double> x, std::span<const double> y, WidthMode mode, double min_peak) {
    if (x.size() != y.size() || x.size() < 2) throw AnalysisError("FWHM needs at least two samples");
    const auto imax = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    const double peak = y[imax];
    if (!(peak >= min_peak)) throw AnalysisError("no resonance: curve maximum below threshold");
    const double half = 0.5 * peak;

    std::size_t lo = imax;
    std::size_t hi = imax;
    if (mode == WidthMode::AllPeaks) {
        for (std::size_t i = 0; i < imax; ++i) {
            if (y[i] >= half) {
                lo = i;
                break;
            }
        }
        for (std::size_t i = y.size() - 1; i > imax; --i) {
            if (y[i] >= half) {
                hi = i;
                break;
            }
        }
    } else {
        while (lo > 0 && y[lo - 1] >= half) --lo;
        while (hi + 1 < y.size() && y[hi + 1] >= half) ++hi;
    }

    auto crossing = [&](std::size_t a, std::size_t b) {
        const double t = (half - y[a]) / (y[b] - y[a]);
        return x[a] + t * (x[b] - x[a]);
    };
    FwhmResult out{0.0, peak, x[imax], false};
    double left = x[lo];
    double right = x[hi];
    if (lo == 0) {
        out.truncated = true;
    } else {
        left = crossing(lo - 1, lo);
    }
    if (hi + 1 == y.size()) {
        out.truncated = true;
    } else {
        right = crossing(hi, hi + 1);
    }
    out.width = right - left;
    return out;
}

std::vector<double> resonance_curve(const DiffractionConfig& config, std::span<const double> momenta,
                                    const AnalysisOptions& options, TransferPath path, int* n_max_used,
                                    double* truncation_difference) {
    config.validate();
    if (path == TransferPath::Auto) {
        path = config.geometry == Geometry::Single ? TransferPath::SingleStep : TransferPath::DoubleStep;
    }
    const int orders = path == TransferPath::SingleStep ? 1 : 2;
    const InternalState state = path == TransferPath::DoubleStep && config.has_excited_state()
                                    ? InternalState::Excited
                                    : InternalState::Ground;
    const InternalState target = state_after(config.mechanism, state, orders);
    std::vector<double> out(momenta.size());
    std::vector<int> used(momenta.size());
    std::vector<double> difference(momenta.size());
    parallel_for(momenta.size(), options.threads, [&](std::size_t i) {
        const double p_in = momenta[i] - (orders - 1);
        const ConvergedState r = solve_eigenstate(config, p_in, state, options.solver);
        out[i] = std::abs(orders) <= r.state.n_max() ? r.state.population(target, orders) : 0.0;
        used[i] = r.n_max_used;
        difference[i] = r.truncation_difference;
    });
    if (n_max_used != nullptr) *n_max_used = used.empty() ? 0 : *std::max_element(used.begin(), used.end());
    if (truncation_difference != nullptr) {
        *truncation_difference = difference.empty() ? 0.0 : *std::max_element(difference.begin(), difference.end());
    }
    return out;
}

WidthResult resonance_width(const DiffractionConfig& config, const AnalysisOptions& options,
                            const WidthOptions& width_options) {
    if (width_options.fine_samples < 2) throw ConfigError("fine_samples", "must be at least 2");
    const double tau = config.delta_tau;
    const double range = width_options.half_range.value_or(std::min(1.5, std::max(0.75, 12.0 / tau)));
    if (!(range > 0.0)) throw ConfigError("half_range", "must be positive");
    const double coarse_step = std::min(1.0 / 64.0, 1.0 / (8.0 * tau));
    const double center = config.p0;

    WidthResult result;
    const int k_max = static_cast<int>(std::floor(range / coarse_step));
    std::vector<double> coarse_p;
    for (int k = -k_max; k <= k_max; ++k) coarse_p.push_back(center + k * coarse_step);
    int used = 0;
    double difference = 0.0;
    const std::vector<double> coarse =
        resonance_curve(config, coarse_p, options, width_options.path, &used, &difference);
    result.n_max_used = used;
    result.truncation_difference = difference;
    result.evaluations = static_cast<int>(coarse.size());

    const double peak = *std::max_element(coarse.begin(), coarse.end());
    if (!(peak >= 1e-6)) throw AnalysisError("no resonance: curve maximum below 1e-6");
    std::size_t first = 0;
    while (coarse[first] < 0.3 * peak) ++first;
    std::size_t last = coarse.size() - 1;
    while (coarse[last] < 0.3 * peak) --last;

    const double lo = std::max(center - range, coarse_p[first] - coarse_step);
    const double hi = std::min(center + range, coarse_p[last] + coarse_step);
    const double fine_step = 1.0 / width_options.fine_samples;
    std::vector<double> fine_p;
    const int j_lo = static_cast<int>(std::ceil((lo - center) / fine_step - 1e-9));
    const int j_hi = static_cast<int>(std::floor((hi - center) / fine_step + 1e-9));
    for (int j = j_lo; j <= j_hi; ++j) fine_p.push_back(center + j * fine_step);
    const std::vector<double> fine = resonance_curve(config, fine_p, options, width_options.path, &used, &difference);
    result.n_max_used = std::max(result.n_max_used, used);
    result.truncation_difference = std::max(result.truncation_difference, difference);
    result.evaluations += static_cast<int>(fine.size());

    result.fwhm = fwhm(fine_p, fine, width_options.mode);
    // Structure may continue past the fine window only at the scan boundary.
    result.fwhm.truncated = result.fwhm.truncated && (lo <= center - range || hi >= center + range);
    return result;
}

OptimalArea optimal_pulse_area(const DiffractionConfig& config, const AnalysisOptions& options) {
    DiffractionConfig c = config;
    c.two_photon_detuning = resonance_detuning(c.mechanism, c.p0);
    c.area_convention = Geometry::Single;

    OptimalArea out;
    auto objective = [&](double area) {
        DiffractionConfig trial = c;
        trial.pulse_area = area;
        ++out.evaluations;
        return transfer_probability(solve_eigenstate(trial, trial.p0, InternalState::Ground, options.solver).state,
                                    1);
    };

    constexpr int kCoarse = 64;
    const double a0 = 0.5 * kPi;
    const double a1 = 1.5 * kPi;
    const double step = (a1 - a0) / (kCoarse - 1);
    std::vector<double> values(kCoarse);
    parallel_for(kCoarse, options.threads, [&](std::size_t i) {
        DiffractionConfig trial = c;
        trial.pulse_area = a0 + step * static_cast<double>(i);
        values[i] = transfer_probability(
            solve_eigenstate(trial, trial.p0, InternalState::Ground, options.solver).state, 1);
    });
    out.evaluations += kCoarse;
    const auto [vmin, vmax] = std::minmax_element(values.begin(), values.end());
    if (*vmax - *vmin < 1e-6) throw AnalysisError("flat objective: transfer does not depend on the pulse area");
    const auto best = static_cast<int>(vmax - values.begin());

    double lo = a0 + step * std::max(0, best - 1);
    double hi = a0 + step * std::min(kCoarse - 1, best + 1);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = objective(x1);
    double f2 = objective(x2);
    while (hi - lo > 1e-3) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = objective(x2);
        }
    }
    out.area = 0.5 * (lo + hi);
    out.transfer = objective(out.area);
    if (*vmax > out.transfer) {
        out.area = a0 + step * best;
        out.transfer = *vmax;
    }
    return out;
}

DiffractionConfig tuned_mirror(const DiffractionConfig& config, double p0, const AnalysisOptions& options,
                               OptimalArea* optimum) {
    DiffractionConfig c = config;
    c.p0 = p0;
    c.two_photon_detuning = resonance_detuning(c.mechanism, p0);
    c.area_convention = Geometry::Single;
    const OptimalArea opt = optimal_pulse_area(c, options);
    c.pulse_area = opt.area;
    if (optimum != nullptr) *optimum = opt;
    return c;
}

TransitionScan transition_scan(const DiffractionConfig& config, std::span<const double> p0_grid,
                               std::span<const double> delta_p_grid, const AnalysisOptions& options) {
    if (p0_grid.empty() || delta_p_grid.empty()) throw ConfigError("grid", "scan axes must not be empty");
    TransitionScan out;
    out.p0.assign(p0_grid.begin(), p0_grid.end());
    out.delta_p.assign(delta_p_grid.begin(), delta_p_grid.end());
    out.efficiency.resize(p0_grid.size() * delta_p_grid.size());
    const Preparation prep{0, InternalState::Ground};

    for (std::size_t i = 0; i < p0_grid.size(); ++i) {
        const double p0 = p0_grid[i];
        OptimalArea opt;
        const DiffractionConfig c = tuned_mirror(config, p0, options, &opt);
        out.optimal_area.push_back(opt.area);
        out.width.push_back(
            resonance_width(c, options, {WidthMode::AllPeaks, TransferPath::SingleStep, {}, 1024}).fwhm.width);

        std::vector<WavePacket> packets;
        int first = 0;
        int last = -1;
        for (double dp : delta_p_grid) {
            packets.push_back(WavePacket::gaussian(p0, dp, options.samples_per_hbark, prep.state,
                                                   c.has_excited_state(), options.packet_cutoff));
            const WavePacket& w = packets.back();
            if (last < first) {
                first = w.first_index();
                last = w.last_index();
            } else {
                first = std::min(first, w.first_index());
                last = std::max(last, w.last_index());
            }
        }
        const InputBlock domain{prep.state, first, last - first + 1};
        const TransitionFunction g = obtain_transition(c, std::span(&domain, 1), options);
        const IntervalSet target = efficiency_target(p0);
        for (std::size_t k = 0; k < packets.size(); ++k) {
            out.efficiency[i * delta_p_grid.size() + k] = apply(g, packets[k]).integrate(target);
        }
        out.n_max_used.push_back(g.n_max_used());
        out.truncation_difference.push_back(g.max_truncation_difference());
    }
    return out;
}

}  // namespace matterwave
