#ifndef PGBAND_INTERVAL_HPP
#define PGBAND_INTERVAL_HPP

#include <optional>
#include <span>
#include <vector>

namespace pgband {

/// Closed real interval [lo, hi]. Also used for open gaps, where the
/// endpoints themselves are excluded.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
    bool contains(const Interval& other, double tol = 0.0) const
    {
        return other.lo >= lo - tol && other.hi <= hi + tol;
    }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Intersection of two closed intervals; nullopt when they are disjoint.
inline std::optional<Interval> intersect(const Interval& a, const Interval& b)
{
    Interval r{a.lo > b.lo ? a.lo : b.lo, a.hi < b.hi ? a.hi : b.hi};
    if (r.lo > r.hi) return std::nullopt;
    return r;
}

/// Maximal open intervals inside [min lo, max hi] not covered by the union
/// of the given closed intervals. Intervals that touch leave no gap.
std::vector<Interval> uncovered_gaps(std::span<const Interval> closed);

}  // namespace pgband

#endif  // PGBAND_INTERVAL_HPP
