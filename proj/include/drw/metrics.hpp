#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "drw/geom_graph.hpp"
#include "drw/overlay.hpp"

namespace drw {

/// Largest distance between active-path nodes relative to the largest
/// distance in the network. In [0, 1]; 0 for a single-node active path.
double depth(const OverlayResult& result, const Network& net);

/// Distinct recruited nodes over all walks, backtracked ones included.
std::size_t active_path_size(const OverlayResult& result);

/// Tukey box-and-whisker summary.
///
/// Quartiles use linear interpolation between closest ranks: for sorted
/// samples x[0..N-1] the p-quantile is x[h] interpolated at h = (N-1) p.
/// Whiskers are the most extreme samples inside [q1 - 1.5 IQR, q3 + 1.5 IQR].
struct BoxStats {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    double lower_whisker = 0.0;
    double upper_whisker = 0.0;
    std::vector<double> outliers;
    std::size_t count = 0;

    double iqr() const { return q3 - q1; }
};

double quantile_sorted(std::span<const double> sorted, double p);

BoxStats box_stats(std::span<const double> samples);

}  // namespace drw
