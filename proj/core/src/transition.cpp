#include "matterwave/transition.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "matterwave/error.hpp"
#include "matterwave/parallel.hpp"

namespace matterwave {

namespace {

constexpr std::array<InternalState, 2> kStates{InternalState::Ground, InternalState::Excited};

int state_count(bool has_excited) { return has_excited ? 2 : 1; }

std::string at_momentum(double p) {
    std::ostringstream os;
    os << " [p_i=" << p << " hbarK]";
    return os.str();
}

}  // namespace

InputBlock InputBlock::covering(double lo, double hi, int samples_per_hbark, InternalState state) {
    auto [first, last] = index_range(lo, hi, samples_per_hbark);
    return {state, first, std::max(0, last - first)};
}

InputBlock InputBlock::order(int m, int samples_per_hbark, InternalState state) {
    return covering(m - 0.5, m + 0.5, samples_per_hbark, state);
}

cplx ColumnView::amplitude(InternalState s_f, int n) const {
    if (std::abs(n) > n_store_) return {};
    if (s_f == InternalState::Excited && !has_excited_) return {};
    const int orders = 2 * n_store_ + 1;
    const int offset = (s_f == InternalState::Ground ? 0 : orders) + n + n_store_;
    return data_[static_cast<std::size_t>(offset)];
}

double ColumnView::norm() const {
    double sum = 0.0;
    for (const cplx& a : data_) sum += std::norm(a);
    return sum;
}

TransitionFunction::TransitionFunction(DiffractionConfig config, SolverSettings settings,
                                       int samples_per_hbark, int n_store, std::vector<Block> blocks)
    : config_(std::move(config)),
      settings_(std::move(settings)),
      samples_(samples_per_hbark),
      n_store_(n_store),
      blocks_(std::move(blocks)) {
    if (samples_ < 2 || samples_ % 2 != 0) throw GridError("samples per hbar K must be even and >= 2");
    const std::size_t stride =
        static_cast<std::size_t>(state_count(has_excited()) * (2 * n_store_ + 1));
    for (const Block& b : blocks_) {
        if (b.amplitudes.size() != stride * static_cast<std::size_t>(b.input.count)) {
            throw FormatError("transition block has inconsistent size");
        }
    }
}

TransitionFunction TransitionFunction::identity(const DiffractionConfig& config, int samples_per_hbark,
                                                std::span<const InputBlock> inputs) {
    DiffractionConfig c = config;
    c.pulse_area = 0.0;
    const int n_store = 0;
    const int states = state_count(c.has_excited_state());
    std::vector<Block> blocks;
    for (const InputBlock& in : inputs) {
        Block b{in, {}, {}, {}};
        b.amplitudes.assign(static_cast<std::size_t>(in.count * states), cplx{});
        for (int k = 0; k < in.count; ++k) {
            const int s = in.state == InternalState::Ground ? 0 : 1;
            b.amplitudes[static_cast<std::size_t>(k * states + s)] = 1.0;
        }
        b.n_max_used.assign(static_cast<std::size_t>(in.count), 0);
        b.truncation_difference.assign(static_cast<std::size_t>(in.count), 0.0);
        blocks.push_back(std::move(b));
    }
    return TransitionFunction(c, SolverSettings{}, samples_per_hbark, n_store, std::move(blocks));
}

int TransitionFunction::n_max_used() const {
    int n = 0;
    for (const Block& b : blocks_) {
        for (int v : b.n_max_used) n = std::max(n, v);
    }
    return n;
}

double TransitionFunction::max_truncation_difference() const {
    double d = 0.0;
    for (const Block& b : blocks_) {
        for (double v : b.truncation_difference) d = std::max(d, v);
    }
    return d;
}

std::optional<ColumnView> TransitionFunction::column(int index, InternalState s_i) const {
    const std::size_t stride =
        static_cast<std::size_t>(state_count(has_excited()) * (2 * n_store_ + 1));
    for (const Block& b : blocks_) {
        if (b.input.state == s_i && b.input.contains(index)) {
            const std::size_t k = static_cast<std::size_t>(index - b.input.first);
            return ColumnView(std::span<const cplx>(b.amplitudes).subspan(k * stride, stride), n_store_,
                              has_excited());
        }
    }
    return std::nullopt;
}

ColumnView TransitionFunction::require_column(int index, InternalState s_i) const {
    auto col = column(index, s_i);
    if (!col) {
        std::ostringstream os;
        os << "p_i=" << momentum(index) << " hbarK (state " << to_string(s_i)
           << ") is outside the transition-function domain";
        throw GridError(os.str());
    }
    return *col;
}

cplx TransitionFunction::element(int input_index, InternalState s_i, InternalState s_f, int n) const {
    return require_column(input_index, s_i).amplitude(s_f, n);
}

TransitionFunction build_transition(const DiffractionConfig& config, const SolverSettings& settings,
                                    int samples_per_hbark, std::span<const InputBlock> inputs,
                                    const BuildOptions& options) {
    config.validate();
    settings.validate();
    if (samples_per_hbark < 2 || samples_per_hbark % 2 != 0) {
        throw GridError("samples per hbar K must be even and >= 2");
    }
    for (const InputBlock& in : inputs) {
        if (in.state == InternalState::Excited && !config.has_excited_state()) {
            throw ConfigError("input_state", "Bragg diffraction has no excited state");
        }
    }
    if (config.pulse_area == 0.0) return TransitionFunction::identity(config, samples_per_hbark, inputs);

    struct Job {
        std::size_t block;
        int index;
    };
    std::vector<Job> jobs;
    for (std::size_t b = 0; b < inputs.size(); ++b) {
        for (int k = 0; k < inputs[b].count; ++k) jobs.push_back({b, inputs[b].first + k});
    }
    std::vector<std::optional<ConvergedState>> results(jobs.size());
    parallel_for(jobs.size(), options.threads, [&](std::size_t i) {
        const Job& job = jobs[i];
        const double p = static_cast<double>(job.index) / samples_per_hbark;
        const InputBlock& in = inputs[job.block];
        const int order = config.n_max.value_or(kMinAutoOrder);
        try {
            results[i] = evolve_converged(AmplitudeState::eigenstate(config.mechanism, order, p, in.state, 0),
                                          config, settings);
        } catch (const SolverError& e) {
            throw SolverError(e.reason() + at_momentum(p), e.time(), e.norm());
        } catch (const ConvergenceError& e) {
            throw ConvergenceError(e.what() + at_momentum(p), e.last_difference(), e.last_order());
        }
    });

    int n_store = 0;
    for (const auto& r : results) n_store = std::max(n_store, r->n_max_used);
    const bool excited = config.has_excited_state();
    const int orders = 2 * n_store + 1;
    const std::size_t stride = static_cast<std::size_t>(state_count(excited) * orders);

    std::vector<TransitionFunction::Block> blocks;
    std::size_t job = 0;
    for (const InputBlock& in : inputs) {
        TransitionFunction::Block b{in, {}, {}, {}};
        b.amplitudes.assign(stride * static_cast<std::size_t>(in.count), cplx{});
        for (int k = 0; k < in.count; ++k, ++job) {
            const ConvergedState& r = *results[job];
            cplx* col = b.amplitudes.data() + stride * static_cast<std::size_t>(k);
            for (int n = -r.n_max_used; n <= r.n_max_used; ++n) {
                col[n + n_store] = r.state.g(n);
                if (excited) col[orders + n + n_store] = r.state.e(n);
            }
            b.n_max_used.push_back(r.n_max_used);
            b.truncation_difference.push_back(r.truncation_difference);
        }
        blocks.push_back(std::move(b));
    }
    return TransitionFunction(config, settings, samples_per_hbark, n_store, std::move(blocks));
}

WavePacket apply(const TransitionFunction& g, const WavePacket& psi) {
    if (psi.samples_per_hbark() != g.samples_per_hbark()) throw GridError("grid spacing mismatch");
    const bool excited = g.has_excited();
    if (psi.has_excited() && !excited) {
        for (const cplx& a : psi.component(InternalState::Excited)) {
            if (a != cplx{}) throw GridError("excited-state amplitudes on a Bragg pulse");
        }
    }
    const auto [lo, hi] = psi.support();
    const int s = g.samples_per_hbark();
    const int n_store = g.n_store();
    if (hi < lo) return WavePacket(s, psi.first_index(), 0, excited);

    WavePacket out(s, lo - n_store * s, (hi - lo + 1) + 2 * n_store * s, excited);
    for (InternalState s_i : kStates) {
        if (s_i == InternalState::Excited && !psi.has_excited()) continue;
        for (int j = lo; j <= hi; ++j) {
            const cplx a = psi.value(s_i, j);
            if (a == cplx{}) continue;
            const ColumnView col = g.require_column(j, s_i);
            for (InternalState s_f : kStates) {
                if (s_f == InternalState::Excited && !excited) continue;
                for (int n = -n_store; n <= n_store; ++n) {
                    out.at(s_f, j + n * s) += col.amplitude(s_f, n) * a;
                }
            }
        }
    }
    return out;
}

}  // namespace matterwave
