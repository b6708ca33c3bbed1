#include "mfgexec/validate.hpp"

#include <cmath>

#include "mfgexec/meanfield.hpp"
#include "mfgexec/numerics.hpp"

namespace mfgexec {

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_rel_dev(const std::vector<double>& test, const std::vector<double>& ref) {
    double m = 0.0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        const double den = std::max(std::abs(ref[i]), 1e-300);
        m = std::max(m, std::abs(test[i] - ref[i]) / den);
    }
    return m;
}

}  // namespace

ResidualCheck residual_check(const RiccatiTables& tables, const ParamSet& p) {
    const std::size_t n = tables.grid.n_intervals;
    const double h = tables.grid.step;
    const double ka2 = 2.0 * p.kappa_a, kn2 = 2.0 * p.kappa_n;
    ResidualCheck out;
    const auto rhs = [&](std::size_t k, int which) {
        const double pb = tables.phi_bar[k], cb = tables.chi_bar[k];
        const double zb = tables.zeta_bar[k], eb = tables.eta_bar[k];
        switch (which) {
            case 0:
                return pb * pb / ka2 + zb * pb / kn2 - p.alpha_a / ka2 * pb -
                       p.alpha_n / kn2 * zb - 2.0 * p.phi_run;
            case 1:
                return (pb - p.alpha_a) / ka2 * cb + (pb - p.alpha_n) / kn2 * eb;
            case 2:
                return zb * zb / kn2 + zb * pb / ka2 - p.alpha_n / kn2 * zb -
                       p.alpha_a / ka2 * pb - 2.0 * p.phi_run;
            default:
                return (zb - p.alpha_a) / ka2 * cb + (zb - p.alpha_n) / kn2 * eb;
        }
    };
    const std::vector<double>* tabs[4] = {&tables.phi_bar, &tables.chi_bar, &tables.zeta_bar,
                                          &tables.eta_bar};
    for (std::size_t k = 1; k < n; ++k) {
        for (int w = 0; w < 4; ++w) {
            const double cd = ((*tabs[w])[k + 1] - (*tabs[w])[k - 1]) / (2.0 * h);
            const double r = std::abs(cd - rhs(k, w));
            if (r > out.max_abs) {
                out.max_abs = r;
                out.argmax_t = tables.grid.t_values[k];
            }
            if (tables.grid.t_values[k] <= 0.85 * tables.grid.horizon) {
                out.interior_max_abs = std::max(out.interior_max_abs, r);
            }
        }
    }
    return out;
}

double observed_convergence_order(const ParamSet& p, std::size_t n) {
    const RiccatiTables t1 = solve_mean_system_oracle(p, TimeGrid::uniform(p.horizon, n));
    const RiccatiTables t2 = solve_mean_system_oracle(p, TimeGrid::uniform(p.horizon, 2 * n));
    const RiccatiTables t4 = solve_mean_system_oracle(p, TimeGrid::uniform(p.horizon, 4 * n));
    double d12 = 0.0, d24 = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        d12 = std::max(d12, std::abs(t1.phi_bar[k] - t2.phi_bar[2 * k]));
        d24 = std::max(d24, std::abs(t2.phi_bar[2 * k] - t4.phi_bar[4 * k]));
    }
    if (d24 == 0.0) return 16.0;  // differences below roundoff
    return std::log2(d12 / d24);
}

ValidationReport build_validation_report(const ParamSet& p, std::size_t grid_intervals,
                                         std::size_t dual_method_grid_intervals) {
    const Coefficients c = derive_coefficients(p);
    const TimeGrid grid = TimeGrid::uniform(p.horizon, grid_intervals);
    const RiccatiTables tables = solve_oracle(p, grid);
    const std::size_t n = grid.n_intervals;

    ValidationReport r;
    r.grid_intervals = grid_intervals;
    r.dual_method_grid_intervals = dual_method_grid_intervals;

    std::vector<double> cf_pb(n + 1), cf_ps(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        cf_pb[k] = phi_bar_closed_form(grid.t_values[k], p, c);
        cf_ps[k] = phi_self_closed_form(grid.t_values[k], p, c);
    }
    r.phi_bar_closed_max_rel_dev = max_rel_dev(cf_pb, tables.phi_bar);
    r.phi_self_closed_max_rel_dev = max_rel_dev(cf_ps, tables.phi_self);
    r.phi_bar_closed_at0 = cf_pb[0];
    r.phi_bar_oracle_at0 = tables.phi_bar[0];
    r.phi_self_closed_at0 = cf_ps[0];
    r.phi_self_oracle_at0 = tables.phi_self[0];

    const double two_psi = 2.0 * p.psi;
    const double chi_T = -2.0 * p.psi * p.q_target;
    r.terminal_max_abs_err = std::max(
        {std::abs(tables.phi_bar[n] - two_psi), std::abs(tables.zeta_bar[n] - two_psi),
         std::abs(tables.phi_self[n] - two_psi), std::abs(tables.zeta_self[n] - two_psi),
         std::abs(tables.chi_bar[n] - chi_T), std::abs(tables.eta_bar[n] - chi_T)});
    r.symmetry_phi_max = max_abs_diff(tables.phi_bar, tables.zeta_bar);
    r.symmetry_chi_max = max_abs_diff(tables.chi_bar, tables.eta_bar);
    r.symmetry_self_max = max_abs_diff(tables.phi_self, tables.zeta_self);

    const ResidualCheck res = residual_check(tables, p);
    r.residual_max = res.max_abs;
    r.residual_argmax_t = res.argmax_t;
    r.residual_interior_max = res.interior_max_abs;
    r.residual_bound = 10.0 * grid.step * grid.step;
    const RiccatiTables half = solve_mean_system_oracle(p, TimeGrid::uniform(p.horizon, 2 * n));
    const ResidualCheck res_half = residual_check(half, p);
    r.residual_halving_ratio = res_half.max_abs > 0.0 ? res.max_abs / res_half.max_abs : 0.0;
    r.convergence_order = observed_convergence_order(p, n);

    r.fixed_point_gap_mean = std::abs(tables.phi_bar[0] - c.fixed_point_mean);
    r.fixed_point_gap_self = std::abs(tables.phi_self[0] - c.fixed_point_self);

    r.chi_bar_exp_route_max_rel = max_rel_dev(chi_bar_from_phibar(tables, p), tables.chi_bar);

    {
        // dual-method V̄ comparison runs from zero initial inventory
        ParamSet p0 = p;
        p0.q0_a = 0.0;
        p0.q0_n = 0.0;
        const TimeGrid fine = TimeGrid::uniform(p.horizon, dual_method_grid_intervals);
        const RiccatiTables ft = solve_oracle(p0, fine);
        const MeanFieldTrajectory tr = mean_inventory_trajectory(ft, p0);
        const std::vector<double> Vq = mean_total_quadrature_formula(ft, p0);
        double scale = 1.0;
        for (double v : tr.V_bar) scale = std::max(scale, std::abs(v));
        double m = 0.0;
        for (std::size_t k = 0; k < Vq.size(); ++k) m = std::max(m, std::abs(Vq[k] - tr.V_bar[k]));
        r.dual_method_V_max_rel = m / scale;
    }

    {
        const MeanFieldTrajectory tr = mean_inventory_trajectory(tables, p);
        const std::vector<double> chi_q = chi_self_quadrature(tables, tr, p);
        r.chi_quadrature_vs_algebraic = max_abs_diff(chi_q, tr.chi_self);
        r.chi_quadrature_terminal_gap = std::abs(chi_q[n] - chi_T);
    }
    return r;
}

nlohmann::json validation_to_json(const ValidationReport& r) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["closed_form"] = {{"phi_bar_max_rel_dev", r.phi_bar_closed_max_rel_dev},
                        {"phi_self_max_rel_dev", r.phi_self_closed_max_rel_dev},
                        {"phi_bar_at0", {{"closed_form", r.phi_bar_closed_at0},
                                         {"oracle", r.phi_bar_oracle_at0}}},
                        {"phi_self_at0", {{"closed_form", r.phi_self_closed_at0},
                                          {"oracle", r.phi_self_oracle_at0}}}};
    j["oracle"] = {{"terminal_max_abs_err", r.terminal_max_abs_err},
                   {"symmetry_phi_max", r.symmetry_phi_max},
                   {"symmetry_chi_max", r.symmetry_chi_max},
                   {"symmetry_self_max", r.symmetry_self_max},
                   {"residual_max", r.residual_max},
                   {"residual_argmax_t", r.residual_argmax_t},
                   {"residual_interior_max", r.residual_interior_max},
                   {"residual_bound_10h2", r.residual_bound},
                   {"residual_halving_ratio", r.residual_halving_ratio},
                   {"convergence_order", r.convergence_order},
                   {"fixed_point_gap_mean", r.fixed_point_gap_mean},
                   {"fixed_point_gap_self", r.fixed_point_gap_self}};
    j["quadrature"] = {{"chi_bar_exp_route_max_rel", r.chi_bar_exp_route_max_rel},
                       {"dual_method_V_max_rel", r.dual_method_V_max_rel},
                       {"chi_quadrature_vs_algebraic_sup", r.chi_quadrature_vs_algebraic},
                       {"chi_quadrature_terminal_gap", r.chi_quadrature_terminal_gap}};
    j["grid_intervals"] = r.grid_intervals;
    j["dual_method_grid_intervals"] = r.dual_method_grid_intervals;
    return j;
}

}  // namespace mfgexec
