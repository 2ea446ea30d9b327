#pragma once

#include <initializer_list>
#include <vector>

namespace matterwave {

struct Interval {
    double lo;
    double hi;

    double width() const noexcept { return hi - lo; }
    bool contains(double p) const noexcept { return p >= lo && p <= hi; }
};

/// Disjoint, sorted union of closed momentum intervals (units of hbar K).
class IntervalSet {
public:
    IntervalSet() = default;
    IntervalSet(std::initializer_list<Interval> intervals);
    explicit IntervalSet(std::vector<Interval> intervals);

    /// [center - 1/2, center + 1/2].
    static IntervalSet window(double center);

    const std::vector<Interval>& intervals() const noexcept { return intervals_; }
    bool empty() const noexcept { return intervals_.empty(); }
    bool contains(double p) const noexcept;
    /// Half-open membership [lo, hi), used when partitioning grid samples.
    bool contains_half_open(double p) const noexcept;
    IntervalSet shifted(double offset) const;

private:
    std::vector<Interval> intervals_;
};

}  // namespace matterwave
