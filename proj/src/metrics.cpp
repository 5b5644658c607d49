#include "drw/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "drw/errors.hpp"

namespace drw {

double depth(const OverlayResult& result, const Network& net)
{
    if (result.active_path.empty()) {
        throw Error(ErrorCode::EmptyOverlay, "active path is empty");
    }
    const double whole = max_pairwise_distance(net);
    if (result.active_path.size() < 2 || whole == 0.0) {
        return 0.0;
    }
    std::vector<Point> pts;
    pts.reserve(result.active_path.size());
    for (NodeId v : result.active_path) {
        pts.push_back(net.position(v));
    }
    return max_pairwise_distance(pts) / whole;
}

std::size_t active_path_size(const OverlayResult& result)
{
    return result.active_path.size();
}

double quantile_sorted(std::span<const double> sorted, double p)
{
    if (sorted.empty()) {
        throw Error(ErrorCode::EmptySample, "no samples");
    }
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) {
        return sorted.back();
    }
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

BoxStats box_stats(std::span<const double> samples)
{
    if (samples.empty()) {
        throw Error(ErrorCode::EmptySample, "no samples");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());

    BoxStats s;
    s.count = sorted.size();
    s.min = sorted.front();
    s.max = sorted.back();
    s.q1 = quantile_sorted(sorted, 0.25);
    s.median = quantile_sorted(sorted, 0.5);
    s.q3 = quantile_sorted(sorted, 0.75);

    const double lo_fence = s.q1 - 1.5 * s.iqr();
    const double hi_fence = s.q3 + 1.5 * s.iqr();
    s.lower_whisker = s.q1;
    s.upper_whisker = s.q3;
    for (double x : sorted) {
        if (x < lo_fence || x > hi_fence) {
            s.outliers.push_back(x);
        } else {
            s.lower_whisker = std::min(s.lower_whisker, x);
            s.upper_whisker = std::max(s.upper_whisker, x);
        }
    }
    return s;
}

}  // namespace drw
