#include "matterwave/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "matterwave/error.hpp"
#include "matterwave/units.hpp"

namespace matterwave {

namespace {

constexpr InternalState kG = InternalState::Ground;

IntervalSet everything_of(const WavePacket& psi) {
    const double lo = psi.momentum(psi.first_index()) - 1.0;
    const double hi = psi.momentum(psi.last_index()) + 1.0;
    return IntervalSet{{lo, hi}};
}

// Input blocks covering the given packets (each restricted to one state).
// Overlapping ranges of the same state are merged.
std::vector<InputBlock> covering_blocks(std::span<const WavePacket> packets, std::span<const InternalState> states) {
    std::vector<InputBlock> blocks;
    for (std::size_t i = 0; i < packets.size(); ++i) {
        const auto [lo, hi] = packets[i].support();
        if (hi < lo) continue;
        blocks.push_back({states[i], lo, hi - lo + 1});
    }
    std::sort(blocks.begin(), blocks.end(), [](const InputBlock& a, const InputBlock& b) {
        return a.state != b.state ? a.state < b.state : a.first < b.first;
    });
    std::vector<InputBlock> merged;
    for (const InputBlock& b : blocks) {
        if (!merged.empty() && merged.back().state == b.state && b.first <= merged.back().last() + 1) {
            const int last = std::max(merged.back().last(), b.last());
            merged.back().count = last - merged.back().first + 1;
        } else {
            merged.push_back(b);
        }
    }
    return merged;
}

}  // namespace

void ArmSpec::validate() const {
    for (std::size_t k = 0; k < steps.size(); ++k) {
        if (steps[k].window.empty()) throw ConfigError("arm.window", "empty momentum window");
        if (k > 0 && steps[k].input_state != steps[k - 1].output_state) {
            throw ConfigError("arm.state", "internal states of consecutive pulses do not chain");
        }
    }
}

ArmPair main_arms(Mechanism mechanism, Geometry geometry) {
    const InternalState r = mechanism == Mechanism::Raman ? InternalState::Excited : kG;
    const auto w = [](double c) { return IntervalSet::window(c); };
    using K = PulseKind;
    ArmPair arms;
    if (geometry == Geometry::Single) {
        arms.upper.steps = {ArmStep{K::BeamSplitter, kG, r, w(1)}, ArmStep{K::Mirror, r, kG, w(0)},
                            ArmStep{K::BeamSplitter, kG, kG, w(0)}};
        arms.lower.steps = {ArmStep{K::BeamSplitter, kG, kG, w(0)}, ArmStep{K::Mirror, kG, r, w(1)},
                            ArmStep{K::BeamSplitter, r, kG, w(0)}};
    } else {
        arms.upper.steps = {ArmStep{K::BeamSplitter, kG, r, w(1)}, ArmStep{K::Mirror, r, r, w(-1)},
                            ArmStep{K::BeamSplitter, r, kG, w(0)}};
        arms.lower.steps = {ArmStep{K::BeamSplitter, kG, r, w(-1)}, ArmStep{K::Mirror, r, r, w(1)},
                            ArmStep{K::BeamSplitter, r, kG, w(0)}};
    }
    return arms;
}

PulseSequence PulseSequence::from(const DiffractionConfig& config) {
    return {with_pulse(config, PulseKind::BeamSplitter), with_pulse(config, PulseKind::Mirror)};
}

WavePacket propagate_arm(const WavePacket& psi, const ArmSpec& arm, std::span<const TransitionFunction, 3> pulses) {
    arm.validate();
    WavePacket current = psi.projected(arm.steps[0].input_state, everything_of(psi));
    for (std::size_t k = 0; k < arm.steps.size(); ++k) {
        const ArmStep& step = arm.steps[k];
        const WavePacket out = apply(pulses[k], current);
        current = out.size() == 0 ? out : out.projected(step.output_state, step.window);
    }
    return current;
}

InterferogramResult interferogram(const WavePacket& upper, const WavePacket& lower, const IntervalSet& exit_window,
                                  int phase_samples) {
    if (phase_samples < 32) throw ConfigError("phase_samples", "at least 32 phase samples are required");
    InterferogramResult r;
    const auto n = static_cast<std::size_t>(phase_samples);
    r.phases.resize(n);
    r.intensities.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double phi = 2.0 * constants::pi * static_cast<double>(k) / static_cast<double>(n - 1);
        WavePacket up = upper;
        up *= std::polar(1.0, phi);
        r.phases[k] = phi;
        r.intensities[k] = (up + lower).integrate(kG, exit_window);
    }
    const auto [lo, hi] = std::minmax_element(r.intensities.begin(), r.intensities.end());
    r.amplitude = *hi + *lo;
    if (!(r.amplitude >= 1e-9)) throw AnalysisError("degenerate interference signal: amplitude below 1e-9");
    r.contrast = (*hi - *lo) / r.amplitude;

    // Normal equations for I ~ c0 + c1 cos(phi) + c2 sin(phi).
    double m[3][3] = {};
    double v[3] = {};
    for (std::size_t k = 0; k < n; ++k) {
        const double basis[3] = {1.0, std::cos(r.phases[k]), std::sin(r.phases[k])};
        for (int i = 0; i < 3; ++i) {
            v[i] += basis[i] * r.intensities[k];
            for (int j = 0; j < 3; ++j) m[i][j] += basis[i] * basis[j];
        }
    }
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int i = col + 1; i < 3; ++i) {
            if (std::abs(m[i][col]) > std::abs(m[pivot][col])) pivot = i;
        }
        std::swap(m[col], m[pivot]);
        std::swap(v[col], v[pivot]);
        for (int i = 0; i < 3; ++i) {
            if (i == col) continue;
            const double f = m[i][col] / m[col][col];
            for (int j = col; j < 3; ++j) m[i][j] -= f * m[col][j];
            v[i] -= f * v[col];
        }
    }
    const double c0 = v[0] / m[0][0];
    const double c1 = v[1] / m[1][1];
    const double c2 = v[2] / m[2][2];
    double sq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double fit = c0 + c1 * std::cos(r.phases[k]) + c2 * std::sin(r.phases[k]);
        sq += (r.intensities[k] - fit) * (r.intensities[k] - fit);
    }
    r.fit_residual = std::sqrt(sq / static_cast<double>(n)) / r.amplitude;
    r.fit_phase = std::atan2(-c2, c1);
    return r;
}

InterferogramResult signal(const DiffractionConfig& config, double delta_p, int phase_samples,
                           const AnalysisOptions& options) {
    return signal(PulseSequence::from(config), delta_p, phase_samples, options);
}

InterferogramResult signal(const PulseSequence& pulses, double delta_p, int phase_samples,
                           const AnalysisOptions& options) {
    if (phase_samples < 32) throw ConfigError("phase_samples", "at least 32 phase samples are required");
    const DiffractionConfig& base = pulses.beam_splitter;
    base.validate();
    pulses.mirror.validate();
    const ArmPair arms = main_arms(base.mechanism, base.geometry);
    arms.upper.validate();
    arms.lower.validate();

    const WavePacket initial = WavePacket::gaussian(0.0, delta_p, options.samples_per_hbark, kG,
                                                    base.has_excited_state(), options.packet_cutoff);
    std::array<WavePacket, 2> arm_packets = {initial, initial};
    const std::array<const ArmSpec*, 2> specs = {&arms.upper, &arms.lower};
    int n_max_used = 0;
    double truncation = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        const std::array<InternalState, 2> states = {specs[0]->steps[k].input_state, specs[1]->steps[k].input_state};
        const std::vector<InputBlock> blocks = covering_blocks(arm_packets, states);
        const TransitionFunction g = obtain_transition(pulses.for_step(static_cast<int>(k)), blocks, options);
        n_max_used = std::max(n_max_used, g.n_max_used());
        truncation = std::max(truncation, g.max_truncation_difference());
        for (std::size_t a = 0; a < 2; ++a) {
            const ArmStep& step = specs[a]->steps[k];
            const WavePacket in = arm_packets[a].size() == 0
                                      ? arm_packets[a]
                                      : arm_packets[a].projected(step.input_state, everything_of(arm_packets[a]));
            const WavePacket out = apply(g, in);
            arm_packets[a] = out.size() == 0 ? out : out.projected(step.output_state, step.window);
        }
    }
    InterferogramResult r = interferogram(arm_packets[0], arm_packets[1], IntervalSet::window(0.0), phase_samples);
    r.n_max_used = n_max_used;
    r.truncation_difference = truncation;
    return r;
}

InterferometerMap interferometer_map(const DiffractionConfig& config, std::span<const double> delta_p_grid,
                                     std::span<const double> delta_tau_grid, int phase_samples,
                                     const AnalysisOptions& options) {
    InterferometerMap map;
    map.delta_p.assign(delta_p_grid.begin(), delta_p_grid.end());
    map.delta_tau.assign(delta_tau_grid.begin(), delta_tau_grid.end());
    const std::size_t cells = delta_p_grid.size() * delta_tau_grid.size();
    map.amplitude.assign(cells, 0.0);
    map.contrast.assign(cells, std::numeric_limits<double>::quiet_NaN());
    map.n_max_used.assign(cells, 0);
    for (std::size_t i = 0; i < delta_p_grid.size(); ++i) {
        for (std::size_t j = 0; j < delta_tau_grid.size(); ++j) {
            DiffractionConfig c = config;
            c.delta_tau = delta_tau_grid[j];
            const std::size_t idx = map.index(i, j);
            try {
                const InterferogramResult r = signal(c, delta_p_grid[i], phase_samples, options);
                map.amplitude[idx] = r.amplitude;
                map.contrast[idx] = r.contrast;
                map.n_max_used[idx] = r.n_max_used;
            } catch (const AnalysisError&) {
                // blocked paths: A = 0, contrast undefined
            }
        }
    }
    return map;
}

}  // namespace matterwave
