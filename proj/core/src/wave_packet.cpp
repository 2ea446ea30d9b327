#include "matterwave/wave_packet.hpp"

#include <algorithm>
#include <cmath>

#include "matterwave/error.hpp"

namespace matterwave {

namespace {
constexpr double kIndexSlack = 1e-9;
}

std::pair<int, int> index_range(double lo, double hi, int samples_per_hbark) {
    const int first = static_cast<int>(std::ceil(lo * samples_per_hbark - kIndexSlack));
    const int last = static_cast<int>(std::ceil(hi * samples_per_hbark - kIndexSlack));
    return {first, last};
}

WavePacket::WavePacket(int samples_per_hbark, int first_index, int size, bool has_excited)
    : samples_(samples_per_hbark), first_(first_index), size_(size), has_excited_(has_excited) {
    if (samples_per_hbark < 2 || samples_per_hbark % 2 != 0) {
        throw GridError("samples per hbar K must be even and >= 2");
    }
    if (size < 0) throw GridError("negative wave-packet size");
    data_.assign(static_cast<std::size_t>((has_excited ? 2 : 1) * size), cplx{});
}

WavePacket WavePacket::gaussian(double center, double width, int samples_per_hbark,
                                InternalState state, bool has_excited, double cutoff) {
    if (!(width > 0.0)) throw ConfigError("delta_p", "momentum width must be positive");
    if (state == InternalState::Excited && !has_excited) {
        throw ConfigError("input_state", "excited state requested on a ground-only grid");
    }
    const double s = samples_per_hbark;
    int first = static_cast<int>(std::ceil((center - cutoff * width) * s));
    int last = static_cast<int>(std::floor((center + cutoff * width) * s));
    if (last < first) first = last = static_cast<int>(std::lround(center * s));
    WavePacket packet(samples_per_hbark, first, last - first + 1, has_excited);
    double sum = 0.0;
    auto amplitudes = packet.component(state);
    for (int k = 0; k < packet.size(); ++k) {
        const double x = packet.momentum(first + k) - center;
        const double a = std::exp(-x * x / (4.0 * width * width));
        amplitudes[static_cast<std::size_t>(k)] = a;
        sum += a * a;
    }
    const double scale = 1.0 / std::sqrt(sum * packet.spacing());
    for (cplx& a : amplitudes) a *= scale;
    return packet;
}

std::span<cplx> WavePacket::component(InternalState s) {
    if (s == InternalState::Excited && !has_excited_) throw GridError("no excited-state component");
    return std::span<cplx>(data_).subspan(offset(s), static_cast<std::size_t>(size_));
}

std::span<const cplx> WavePacket::component(InternalState s) const {
    if (s == InternalState::Excited && !has_excited_) throw GridError("no excited-state component");
    return std::span<const cplx>(data_).subspan(offset(s), static_cast<std::size_t>(size_));
}

cplx WavePacket::value(InternalState s, int index) const {
    if (s == InternalState::Excited && !has_excited_) return {};
    if (index < first_ || index >= first_ + size_) return {};
    return data_[offset(s) + static_cast<std::size_t>(index - first_)];
}

cplx& WavePacket::at(InternalState s, int index) {
    if (index < first_ || index >= first_ + size_) throw GridError("index outside wave packet");
    return component(s)[static_cast<std::size_t>(index - first_)];
}

double WavePacket::norm() const {
    double sum = 0.0;
    for (const cplx& a : data_) sum += std::norm(a);
    return sum * spacing();
}

double WavePacket::integrate(const IntervalSet& set) const {
    double total = integrate(InternalState::Ground, set);
    if (has_excited_) total += integrate(InternalState::Excited, set);
    return total;
}

// Exact integral of the piecewise-linear interpolant of |psi|^2, which is the
// trapezoidal rule when interval ends fall on grid points.
double WavePacket::integrate(InternalState s, const IntervalSet& set) const {
    if (s == InternalState::Excited && !has_excited_) return 0.0;
    const double h = spacing();
    double total = 0.0;
    for (const Interval& iv : set.intervals()) {
        const int j_begin = std::max(first_ - 1, static_cast<int>(std::floor(iv.lo * samples_)) - 1);
        const int j_end = std::min(last_index() + 1, static_cast<int>(std::ceil(iv.hi * samples_)) + 1);
        for (int j = j_begin; j < j_end; ++j) {
            const double a = momentum(j);
            const double b = momentum(j + 1);
            const double lo = std::max(a, iv.lo);
            const double hi = std::min(b, iv.hi);
            if (!(hi > lo)) continue;
            const double fa = std::norm(value(s, j));
            const double fb = std::norm(value(s, j + 1));
            if (fa == 0.0 && fb == 0.0) continue;
            const double slope = (fb - fa) / h;
            const double f_lo = fa + slope * (lo - a);
            const double f_hi = fa + slope * (hi - a);
            total += 0.5 * (f_lo + f_hi) * (hi - lo);
        }
    }
    return total;
}

WavePacket WavePacket::projected(InternalState s, const IntervalSet& window) const {
    WavePacket out(samples_, first_, size_, has_excited_);
    if (s == InternalState::Excited && !has_excited_) return out;
    auto src = component(s);
    auto dst = out.component(s);
    for (const Interval& iv : window.intervals()) {
        auto [lo, hi] = index_range(iv.lo, iv.hi, samples_);
        lo = std::max(lo, first_);
        hi = std::min(hi, first_ + size_);
        for (int j = lo; j < hi; ++j) {
            dst[static_cast<std::size_t>(j - first_)] = src[static_cast<std::size_t>(j - first_)];
        }
    }
    return out;
}

std::pair<int, int> WavePacket::support() const {
    int lo = first_ + size_;
    int hi = first_ - 1;
    for (int k = 0; k < size_; ++k) {
        bool nonzero = data_[static_cast<std::size_t>(k)] != cplx{};
        if (has_excited_) nonzero = nonzero || data_[static_cast<std::size_t>(k + size_)] != cplx{};
        if (nonzero) {
            lo = std::min(lo, first_ + k);
            hi = std::max(hi, first_ + k);
        }
    }
    return {lo, hi};
}

WavePacket& WavePacket::operator*=(cplx factor) {
    for (cplx& a : data_) a *= factor;
    return *this;
}

WavePacket operator+(const WavePacket& a, const WavePacket& b) {
    if (a.samples_ != b.samples_) throw GridError("grid spacing mismatch");
    const int first = std::min(a.first_, b.first_);
    const int last = std::max(a.last_index(), b.last_index());
    const bool excited = a.has_excited_ || b.has_excited_;
    WavePacket out(a.samples_, first, last - first + 1, excited);
    for (int j = first; j <= last; ++j) {
        out.at(InternalState::Ground, j) = a.value(InternalState::Ground, j) + b.value(InternalState::Ground, j);
        if (excited) {
            out.at(InternalState::Excited, j) =
                a.value(InternalState::Excited, j) + b.value(InternalState::Excited, j);
        }
    }
    return out;
}

}  // namespace matterwave
