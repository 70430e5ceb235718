#pragma once

#include <optional>
#include <span>
#include <vector>

namespace citewin::stats {

double mean(std::span<const double> values);

// Midpoint of the two central values for even sizes. Requires non-empty input.
double median(std::vector<double> values);

// Linear-interpolation quantile on the sorted sample: position (n-1)*prob,
// prob in [0, 1]. Requires non-empty input.
double quantile_linear(std::vector<double> values, double prob);

// Central moments with divisor n.
struct Moments {
    double mean = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
};
Moments central_moments(std::span<const double> values);

// Average ("fractional") ranks in descending order of value: the largest value
// gets rank 1, tied values share the mean of the positions they occupy.
std::vector<double> fractional_ranks_descending(std::span<const double> values);

// Pearson correlation; nullopt when either side has zero variance or fewer
// than two points.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

}  // namespace citewin::stats
