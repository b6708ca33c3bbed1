#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfgexec {

/// Model constants for the two-channel execution game. Field names match the
/// JSON config schema one-to-one.
struct ParamSet {
    double alpha_a = 4e-3;    ///< permanent impact, anonymous channel
    double alpha_n = 5e-3;    ///< permanent impact, identity-revealed channel
    double kappa_a = 1.5e-3;  ///< temporary impact / quadratic cost, anonymous
    double kappa_n = 3e-3;    ///< temporary impact / quadratic cost, revealed
    double sigma_0 = 1.0;     ///< mid-price volatility (common noise)
    double sigma_a = 2.0;     ///< inventory volatility, anonymous channel
    double sigma_n = 4.0;     ///< inventory volatility, revealed channel
    double phi_run = 1.0;     ///< running inventory penalty
    double psi = 1.0;         ///< terminal penalty
    double q_target = 200.0;  ///< terminal inventory target
    double horizon = 1.0;     ///< trading horizon T
    double q0_a = 0.0;        ///< initial inventory, anonymous channel
    double q0_n = 0.0;        ///< initial inventory, revealed channel
    double s0 = 100.0;        ///< initial mid-price
};

/// Scalar coefficients of the adjoint Riccati systems, derived from a ParamSet.
struct Coefficients {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double D = 0.0;
    double E = 0.0;
    double delta_plus = 0.0;
    double delta_minus = 0.0;
    double gamma_plus = 0.0;
    double gamma_minus = 0.0;
    double R = 0.0;       ///< A^2 + B*C
    double S_disc = 0.0;  ///< D*E
    /// stable fixed point of the mean-system Riccati, (D + sqrt(D^2+4BC))/(2B)
    double fixed_point_mean = 0.0;
    /// fixed point of the self-system Riccati, sqrt(C/B)
    double fixed_point_self = 0.0;
};

/// Carries every violated constraint, one message per offending field.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    std::vector<std::string> issues_;
};

/// Returns the input unchanged iff all parameter invariants hold; otherwise
/// throws ValidationError listing every violation by field name.
ParamSet validate_params(const ParamSet& raw);

/// Derives the Riccati coefficients. Expects a validated ParamSet.
Coefficients derive_coefficients(const ParamSet& p);

/// Order-sensitive FNV-1a digest of all fields; used in run manifests.
std::uint64_t param_digest(const ParamSet& p);

}  // namespace mfgexec
