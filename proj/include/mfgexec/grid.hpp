#pragma once

#include <cstddef>
#include <vector>

namespace mfgexec {

/// Uniform time grid on [0, T]. Interval count is kept even so composite
/// Simpson rules apply directly.
struct TimeGrid {
    double horizon = 0.0;
    double step = 0.0;
    std::size_t n_intervals = 0;
    std::vector<double> t_values;  ///< n_intervals + 1 nodes, t[0]=0, t[n]=T

    static TimeGrid uniform(double horizon, std::size_t n_intervals);

    std::size_t n_nodes() const { return n_intervals + 1; }
};

}  // namespace mfgexec
