#include "mfgexec/grid.hpp"

#include <stdexcept>

namespace mfgexec {

TimeGrid TimeGrid::uniform(double horizon, std::size_t n_intervals) {
    if (!(horizon > 0.0)) throw std::invalid_argument("grid horizon must be positive");
    if (n_intervals < 2) throw std::invalid_argument("grid needs at least 2 intervals");
    if (n_intervals % 2 != 0) throw std::invalid_argument("grid interval count must be even");
    TimeGrid g;
    g.horizon = horizon;
    g.n_intervals = n_intervals;
    g.step = horizon / static_cast<double>(n_intervals);
    g.t_values.resize(n_intervals + 1);
    for (std::size_t k = 0; k <= n_intervals; ++k) {
        g.t_values[k] = horizon * static_cast<double>(k) / static_cast<double>(n_intervals);
    }
    g.t_values.back() = horizon;
    return g;
}

}  // namespace mfgexec
