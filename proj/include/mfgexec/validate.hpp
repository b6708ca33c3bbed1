#pragma once

#include <json.hpp>

#include "mfgexec/params.hpp"
#include "mfgexec/riccati.hpp"

namespace mfgexec {

/// Quantitative cross-checks between the ODE oracle, the printed closed
/// forms, and the quadrature routes. The pipeline runs on oracle tables; the
/// printed forms are evaluated and reported here, not trusted.
struct ValidationReport {
    // printed closed forms vs oracle tables
    double phi_bar_closed_max_rel_dev = 0.0;
    double phi_self_closed_max_rel_dev = 0.0;
    double phi_bar_closed_at0 = 0.0, phi_bar_oracle_at0 = 0.0;
    double phi_self_closed_at0 = 0.0, phi_self_oracle_at0 = 0.0;

    // oracle internal diagnostics
    double terminal_max_abs_err = 0.0;   ///< terminal-condition mismatch
    double symmetry_phi_max = 0.0;       ///< max |phi_bar - zeta_bar|
    double symmetry_chi_max = 0.0;       ///< max |chi_bar - eta_bar|
    double symmetry_self_max = 0.0;      ///< max |phi_self - zeta_self|
    double residual_max = 0.0;           ///< centered-difference max residual
    double residual_argmax_t = 0.0;
    double residual_interior_max = 0.0;  ///< over t <= 0.85 T
    double residual_bound = 0.0;         ///< 10 * step^2
    double residual_halving_ratio = 0.0; ///< residual(h) / residual(h/2)
    double convergence_order = 0.0;      ///< observed order from grid halving
    double fixed_point_gap_mean = 0.0;   ///< |phi_bar(0) - analytic fixed point|
    double fixed_point_gap_self = 0.0;

    // quadrature routes
    double chi_bar_exp_route_max_rel = 0.0;   ///< exp-of-integral vs oracle
    double dual_method_V_max_rel = 0.0;       ///< ODE vs printed integral, q0 = 0
    double chi_quadrature_vs_algebraic = 0.0; ///< sup-norm gap of the two chi forms
    double chi_quadrature_terminal_gap = 0.0; ///< |chi_quad(T) + 2 psi q_target|

    std::size_t grid_intervals = 0;
    std::size_t dual_method_grid_intervals = 0;
};

/// Centered-difference residual of the mean-system oracle against its own
/// right-hand sides, interior nodes, max norm.
struct ResidualCheck {
    double max_abs = 0.0;
    double argmax_t = 0.0;
    double interior_max_abs = 0.0;  ///< restricted to t <= 0.85 T
};

ResidualCheck residual_check(const RiccatiTables& tables, const ParamSet& p);

/// Observed RK4 convergence order of phi_bar(0) from runs at n, 2n, 4n.
double observed_convergence_order(const ParamSet& p, std::size_t n);

ValidationReport build_validation_report(const ParamSet& p, std::size_t grid_intervals,
                                         std::size_t dual_method_grid_intervals = 40000);

nlohmann::json validation_to_json(const ValidationReport& r);

}  // namespace mfgexec
