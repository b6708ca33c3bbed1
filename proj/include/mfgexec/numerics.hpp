#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mfgexec {

/// Compensated (Neumaier) summation in index order; deterministic regardless
/// of how the terms were produced.
double neumaier_sum(std::span<const double> xs);

double mean_of(std::span<const double> xs);

/// Sample standard deviation (ddof=1); 0 for fewer than 2 samples.
double sample_sd(std::span<const double> xs);

double median_of(std::vector<double> xs);  // by value: sorts a copy

/// Cumulative integral I[k] = ∫_0^{t_k} f dt on a uniform grid, composite
/// Simpson on even prefixes; odd prefixes add the half-parabola rule, keeping
/// every prefix O(h^4) accurate.
std::vector<double> simpson_cumulative(std::span<const double> f, double h);

/// Linear interpolation of a uniformly gridded table at time t (clamped).
double lerp_table(std::span<const double> values, double step, double t);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::size_t n = 0;
};

/// Ordinary least squares y = a + b x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace mfgexec
