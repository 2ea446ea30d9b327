#include "matterwave/intervals.hpp"

#include <algorithm>

#include "matterwave/error.hpp"

namespace matterwave {

IntervalSet::IntervalSet(std::initializer_list<Interval> intervals)
    : IntervalSet(std::vector<Interval>(intervals)) {}

IntervalSet::IntervalSet(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
    std::sort(intervals_.begin(), intervals_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        if (!(intervals_[i].hi > intervals_[i].lo)) {
            throw ConfigError("interval", "upper bound must exceed lower bound");
        }
        if (i > 0 && intervals_[i].lo < intervals_[i - 1].hi) {
            throw ConfigError("interval", "intervals overlap");
        }
    }
}

IntervalSet IntervalSet::window(double center) { return IntervalSet{{center - 0.5, center + 0.5}}; }

bool IntervalSet::contains(double p) const noexcept {
    return std::any_of(intervals_.begin(), intervals_.end(),
                       [p](const Interval& i) { return i.contains(p); });
}

bool IntervalSet::contains_half_open(double p) const noexcept {
    return std::any_of(intervals_.begin(), intervals_.end(),
                       [p](const Interval& i) { return p >= i.lo && p < i.hi; });
}

IntervalSet IntervalSet::shifted(double offset) const {
    std::vector<Interval> out = intervals_;
    for (Interval& i : out) {
        i.lo += offset;
        i.hi += offset;
    }
    return IntervalSet(std::move(out));
}

}  // namespace matterwave
