#include "pgband/interval.hpp"

#include <algorithm>

namespace pgband {

std::vector<Interval> uncovered_gaps(std::span<const Interval> closed)
{
    std::vector<Interval> sorted(closed.begin(), closed.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> gaps;
    if (sorted.empty()) return gaps;
    double reach = sorted.front().hi;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].lo > reach) gaps.push_back({reach, sorted[i].lo});
        reach = std::max(reach, sorted[i].hi);
    }
    return gaps;
}

}  // namespace pgband
