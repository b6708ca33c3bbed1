#include "mfgexec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace mfgexec {

double neumaier_sum(std::span<const double> xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

double mean_of(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    return neumaier_sum(xs) / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    const double m = mean_of(xs);
    double acc = 0.0, comp = 0.0;
    for (double x : xs) {
        double d = (x - m) * (x - m);
        double t = acc + d;
        comp += (std::abs(acc) >= d) ? (acc - t) + d : (d - t) + acc;
        acc = t;
    }
    return std::sqrt((acc + comp) / static_cast<double>(n - 1));
}

double median_of(std::vector<double> xs) {
    if (xs.empty()) return 0.0;
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return (n % 2 == 1) ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

std::vector<double> simpson_cumulative(std::span<const double> f, double h) {
    const std::size_t n = f.size() - 1;
    std::vector<double> I(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        if (k % 2 == 0) {
            I[k] = I[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
        } else if (k < n) {
            I[k] = I[k - 1] + h / 12.0 * (5.0 * f[k - 1] + 8.0 * f[k] - f[k + 1]);
        } else {
            I[k] = I[k - 1] + h / 12.0 * (-f[k - 2] + 8.0 * f[k - 1] + 5.0 * f[k]);
        }
    }
    return I;
}

double lerp_table(std::span<const double> values, double step, double t) {
    if (values.empty()) throw std::invalid_argument("lerp_table: empty table");
    const std::size_t n = values.size() - 1;
    double x = t / step;
    if (x <= 0.0) return values.front();
    if (x >= static_cast<double>(n)) return values.back();
    const auto k = static_cast<std::size_t>(x);
    const double w = x - static_cast<double>(k);
    return values[k] * (1.0 - w) + values[k + 1] * w;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    LineFit out;
    out.n = x.size();
    if (x.size() != y.size() || x.size() < 2) return out;
    const double mx = mean_of(x), my = mean_of(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    if (x.size() > 2) {
        double sse = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - (out.intercept + out.slope * x[i]);
            sse += r * r;
        }
        out.slope_stderr = std::sqrt(sse / static_cast<double>(x.size() - 2) / sxx);
    }
    return out;
}

}  // namespace mfgexec
