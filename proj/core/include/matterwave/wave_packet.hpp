#pragma once

#include <complex>
#include <span>
#include <vector>

#include "matterwave/amplitude_state.hpp"
#include "matterwave/config.hpp"
#include "matterwave/intervals.hpp"

namespace matterwave {

/// Momentum-space wave function on a uniform grid p_j = j / S (S samples per
/// hbar K), so shifts by hbar K map grid points onto grid points. Stores the
/// contiguous index range [first_index, first_index + size); the wave function
/// vanishes outside it. Normalization: sum_j h |psi_j|^2 = 1 with h = 1/S,
/// the trapezoidal rule for a function decaying to zero at the ends.
class WavePacket {
public:
    WavePacket(int samples_per_hbark, int first_index, int size, bool has_excited);

    /// Gaussian psi(p) ~ exp(-(p - center)^2 / (4 width^2)) in `state`,
    /// sampled within center +- cutoff * width (at least the nearest sample)
    /// and normalized on the grid.
    static WavePacket gaussian(double center, double width, int samples_per_hbark,
                               InternalState state, bool has_excited, double cutoff = 6.0);

    int samples_per_hbark() const noexcept { return samples_; }
    double spacing() const noexcept { return 1.0 / samples_; }
    int first_index() const noexcept { return first_; }
    int last_index() const noexcept { return first_ + size_ - 1; }
    int size() const noexcept { return size_; }
    bool has_excited() const noexcept { return has_excited_; }
    double momentum(int index) const noexcept { return static_cast<double>(index) / samples_; }

    std::span<cplx> component(InternalState s);
    std::span<const cplx> component(InternalState s) const;
    /// Amplitude at absolute grid index (zero outside the stored range).
    cplx value(InternalState s, int index) const;
    cplx& at(InternalState s, int index);

    /// Total probability over both internal states.
    double norm() const;
    /// Trapezoidal integral of |psi|^2 (summed over internal states) over the set.
    double integrate(const IntervalSet& set) const;
    double integrate(InternalState s, const IntervalSet& set) const;

    /// Keeps only component `s` on samples inside `window` (half-open per
    /// interval); everything else is zeroed.
    WavePacket projected(InternalState s, const IntervalSet& window) const;

    /// Index range containing all non-zero samples; empty optional-like pair
    /// (first > last) when the packet is identically zero.
    std::pair<int, int> support() const;

    WavePacket& operator*=(cplx factor);
    /// Sum on the union of both index ranges. Grids must match.
    friend WavePacket operator+(const WavePacket& a, const WavePacket& b);

private:
    std::size_t offset(InternalState s) const noexcept {
        return s == InternalState::Ground ? 0 : static_cast<std::size_t>(size_);
    }

    int samples_;
    int first_;
    int size_;
    bool has_excited_;
    std::vector<cplx> data_;
};

/// Grid-index range [first, last) covered by the half-open interval [lo, hi).
std::pair<int, int> index_range(double lo, double hi, int samples_per_hbark);

}  // namespace matterwave
