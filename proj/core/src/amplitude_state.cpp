#include "matterwave/amplitude_state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "matterwave/error.hpp"

namespace matterwave {

AmplitudeState::AmplitudeState(int n_max, bool has_excited, double quasi_momentum)
    : n_max_(n_max), has_excited_(has_excited), quasi_momentum_(quasi_momentum) {
    if (n_max < 0) throw ConfigError("n_max", "must be non-negative");
    data_.assign(static_cast<std::size_t>((has_excited ? 2 : 1) * orders()), cplx{});
}

AmplitudeState AmplitudeState::eigenstate(Mechanism mechanism, int n_max, double quasi_momentum,
                                          InternalState state, int order) {
    const bool raman = mechanism == Mechanism::Raman;
    if (!raman && state == InternalState::Excited) {
        throw ConfigError("input_state", "Bragg diffraction has no excited-state amplitudes");
    }
    if (std::abs(order) > n_max) throw ConfigError("order", "outside the truncated ladder");
    AmplitudeState s(n_max, raman, quasi_momentum);
    s.at(state, order) = 1.0;
    return s;
}

cplx& AmplitudeState::e(int n) {
    if (!has_excited_) throw ConfigError("state", "no excited-state amplitudes");
    return data_[index(n) + static_cast<std::size_t>(orders())];
}

const cplx& AmplitudeState::e(int n) const {
    if (!has_excited_) throw ConfigError("state", "no excited-state amplitudes");
    return data_[index(n) + static_cast<std::size_t>(orders())];
}

double AmplitudeState::norm() const noexcept {
    double sum = 0.0;
    for (const cplx& a : data_) sum += std::norm(a);
    return sum;
}

AmplitudeState AmplitudeState::resized(int n_max) const {
    AmplitudeState out(n_max, has_excited_, quasi_momentum_);
    const int common = std::min(n_max, n_max_);
    for (int n = -common; n <= common; ++n) {
        out.g(n) = g(n);
        if (has_excited_) out.e(n) = e(n);
    }
    return out;
}

double AmplitudeState::max_difference(const AmplitudeState& a, const AmplitudeState& b) {
    const int common = std::min(a.n_max(), b.n_max());
    double diff = 0.0;
    for (int n = -common; n <= common; ++n) {
        diff = std::max(diff, std::abs(a.g(n) - b.g(n)));
        if (a.has_excited() && b.has_excited()) diff = std::max(diff, std::abs(a.e(n) - b.e(n)));
    }
    return diff;
}

}  // namespace matterwave
