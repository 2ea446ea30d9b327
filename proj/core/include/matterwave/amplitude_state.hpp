#pragma once

#include <complex>
#include <span>
#include <vector>

#include "matterwave/config.hpp"

namespace matterwave {

using cplx = std::complex<double>;

/// Amplitudes g_n = g(p + n hbar K) (and e_n for Raman) on the truncated
/// ladder n in [-n_max, n_max] around the quasi-momentum p.
class AmplitudeState {
public:
    AmplitudeState(int n_max, bool has_excited, double quasi_momentum);

    /// |state, p + order hbar K>.
    static AmplitudeState eigenstate(Mechanism mechanism, int n_max, double quasi_momentum,
                                     InternalState state, int order);

    int n_max() const noexcept { return n_max_; }
    int orders() const noexcept { return 2 * n_max_ + 1; }
    bool has_excited() const noexcept { return has_excited_; }
    double quasi_momentum() const noexcept { return quasi_momentum_; }

    cplx& g(int n) { return data_[index(n)]; }
    const cplx& g(int n) const { return data_[index(n)]; }
    cplx& e(int n);
    const cplx& e(int n) const;
    cplx& at(InternalState s, int n) { return s == InternalState::Ground ? g(n) : e(n); }
    const cplx& at(InternalState s, int n) const { return s == InternalState::Ground ? g(n) : e(n); }

    std::span<cplx> data() noexcept { return data_; }
    std::span<const cplx> data() const noexcept { return data_; }

    double norm() const noexcept;
    double population(InternalState s, int n) const { return std::norm(at(s, n)); }

    /// Same physical state on a ladder of a different size. Amplitudes beyond
    /// the new range are dropped.
    AmplitudeState resized(int n_max) const;

    /// Largest |a - b| over orders present in both states.
    static double max_difference(const AmplitudeState& a, const AmplitudeState& b);

private:
    std::size_t index(int n) const noexcept { return static_cast<std::size_t>(n + n_max_); }

    int n_max_;
    bool has_excited_;
    double quasi_momentum_;
    std::vector<cplx> data_;
};

}  // namespace matterwave
