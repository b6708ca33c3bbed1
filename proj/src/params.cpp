#include "mfgexec/params.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace mfgexec {

namespace {

std::string join(const std::vector<std::string>& parts) {
    std::ostringstream os;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) os << "; ";
        os << parts[i];
    }
    return os.str();
}

void require_positive(std::vector<std::string>& issues, double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        issues.push_back(std::string(name) + " must be positive");
    }
}

void require_nonnegative(std::vector<std::string>& issues, double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        issues.push_back(std::string(name) + " must be nonnegative");
    }
}

void require_finite(std::vector<std::string>& issues, double v, const char* name) {
    if (!std::isfinite(v)) {
        issues.push_back(std::string(name) + " must be finite");
    }
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
    : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

ParamSet validate_params(const ParamSet& raw) {
    std::vector<std::string> issues;
    require_positive(issues, raw.alpha_a, "alpha_a");
    require_positive(issues, raw.alpha_n, "alpha_n");
    require_positive(issues, raw.kappa_a, "kappa_a");
    require_positive(issues, raw.kappa_n, "kappa_n");
    require_nonnegative(issues, raw.sigma_0, "sigma_0");
    require_nonnegative(issues, raw.sigma_a, "sigma_a");
    require_nonnegative(issues, raw.sigma_n, "sigma_n");
    require_positive(issues, raw.phi_run, "phi_run");
    require_nonnegative(issues, raw.psi, "psi");
    require_positive(issues, raw.horizon, "horizon");
    require_finite(issues, raw.q_target, "q_target");
    require_finite(issues, raw.q0_a, "q0_a");
    require_finite(issues, raw.q0_n, "q0_n");
    require_finite(issues, raw.s0, "s0");
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return raw;
}

Coefficients derive_coefficients(const ParamSet& p) {
    Coefficients c;
    const double ra = p.alpha_a / (2.0 * p.kappa_a);
    const double rn = p.alpha_n / (2.0 * p.kappa_n);
    c.A = -0.5 * (ra + rn);
    c.B = 1.0 / (2.0 * p.kappa_a) + 1.0 / (2.0 * p.kappa_n);
    c.C = 2.0 * p.phi_run;
    c.D = ra + rn;
    c.E = 2.0 * p.phi_run;
    c.R = c.A * c.A + c.B * c.C;
    c.S_disc = c.D * c.E;
    const double sqrtR = std::sqrt(c.R);
    c.delta_plus = c.A + sqrtR;
    c.delta_minus = c.A - sqrtR;
    const double sqrtS = std::sqrt(c.S_disc);
    c.gamma_plus = sqrtS;
    c.gamma_minus = -sqrtS;
    c.fixed_point_mean = (c.D + std::sqrt(c.D * c.D + 4.0 * c.B * c.C)) / (2.0 * c.B);
    c.fixed_point_self = std::sqrt(c.C / c.B);
    return c;
}

std::uint64_t param_digest(const ParamSet& p) {
    const double fields[] = {p.alpha_a, p.alpha_n, p.kappa_a, p.kappa_n, p.sigma_0,
                             p.sigma_a, p.sigma_n, p.phi_run, p.psi,     p.q_target,
                             p.horizon, p.q0_a,    p.q0_n,    p.s0};
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (double f : fields) {
        std::uint64_t bits = std::bit_cast<std::uint64_t>(f);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xffu;
            h *= 0x100000001b3ull;
        }
    }
    return h;
}

}  // namespace mfgexec
