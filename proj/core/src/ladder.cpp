#include "matterwave/ladder.hpp"

#include <cmath>

#include "matterwave/error.hpp"
#include "matterwave/pulse.hpp"

namespace matterwave {

LadderSystem::LadderSystem(const DiffractionConfig& config, double quasi_momentum, int n_max,
                           bool time_reversed)
    : LadderSystem(config, quasi_momentum, n_max, GratingWeights::for_geometry(config.geometry),
                   time_reversed) {}

LadderSystem::LadderSystem(const DiffractionConfig& config, double quasi_momentum, int n_max,
                           GratingWeights weights, bool time_reversed)
    : config_(config),
      mechanism_(config.mechanism),
      n_max_(n_max),
      peak_(config.peak_coupling()),
      doppler_(doppler_frequency(quasi_momentum)),
      detuning_(config.two_photon_detuning),
      weights_(weights),
      time_reversed_(time_reversed) {
    config.validate();
    if (n_max < 1) throw ConfigError("n_max", "ladder needs at least one order on each side");
}

std::size_t LadderSystem::dimension() const noexcept {
    const auto orders = static_cast<std::size_t>(2 * n_max_ + 1);
    return mechanism_ == Mechanism::Raman ? 2 * orders : orders;
}

void LadderSystem::operator()(double t, std::span<const cplx> y, std::span<cplx> dydt) const {
    if (y.size() != dimension() || dydt.size() != dimension()) {
        throw ConfigError("state", mechanism_ == Mechanism::Raman
                                       ? "Raman ladder needs ground and excited amplitudes"
                                       : "state size does not match the Bragg ladder");
    }
    if (time_reversed_) {
        evaluate(-t, y, dydt);
        for (cplx& d : dydt) d = -d;
    } else {
        evaluate(t, y, dydt);
    }
}

void LadderSystem::evaluate(double t, std::span<const cplx> y, std::span<cplx> dydt) const {
    for (cplx& d : dydt) d = cplx{};
    double omega = peak_;
    if (config_.envelope == EnvelopeShape::Gaussian) {
        const double x = t / config_.delta_tau;
        omega *= std::exp(-0.5 * x * x);
    } else if (std::abs(t) > 0.5 * config_.delta_tau) {
        omega = 0.0;
    }
    if (omega == 0.0) return;

    const int orders = 2 * n_max_ + 1;
    const cplx i_omega{0.0, omega};
    // exp(-i theta(n, s) t) built by recurrence in n, starting at n = -n_max.
    const double lowest = doppler_ + 2.0 * (-n_max_) + 1.0;
    cplx fwd = std::polar(1.0, -(lowest - detuning_) * t);
    cplx bwd = std::polar(1.0, -(lowest + detuning_) * t);
    const cplx step = std::polar(1.0, -2.0 * t);
    const double wf = weights_.forward;
    const double wb = weights_.backward;

    if (mechanism_ == Mechanism::Bragg) {
        for (int k = 0; k + 1 < orders; ++k) {
            const cplx c = i_omega * (wf * fwd + wb * bwd);
            dydt[k] += c * y[k + 1];
            // i conj(Omega (...)) = -conj(i Omega (...))
            dydt[k + 1] -= std::conj(c) * y[k];
            fwd *= step;
            bwd *= step;
        }
        return;
    }

    const std::span<const cplx> g = y.first(orders);
    const std::span<const cplx> e = y.last(orders);
    const std::span<cplx> dg = dydt.first(orders);
    const std::span<cplx> de = dydt.last(orders);
    for (int k = 0; k + 1 < orders; ++k) {
        if (wf != 0.0) {
            const cplx c = i_omega * wf * fwd;
            dg[k] += c * e[k + 1];
            de[k + 1] -= std::conj(c) * g[k];
        }
        if (wb != 0.0) {
            const cplx c = i_omega * wb * bwd;
            de[k] += c * g[k + 1];
            dg[k + 1] -= std::conj(c) * e[k];
        }
        fwd *= step;
        bwd *= step;
    }
}

AmplitudeState LadderSystem::derivative(double t, const AmplitudeState& state) const {
    AmplitudeState out(state.n_max(), state.has_excited(), state.quasi_momentum());
    (*this)(t, state.data(), out.data());
    return out;
}

}  // namespace matterwave
