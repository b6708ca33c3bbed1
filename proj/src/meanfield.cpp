#include "mfgexec/meanfield.hpp"

#include <cmath>
#include <stdexcept>

#include "mfgexec/csv.hpp"
#include "mfgexec/numerics.hpp"

namespace mfgexec {

namespace {

constexpr double kPhiFloor = 1e-12;

/// f = -chi/phi with the 0/0 limit resolved to 0 (psi = 0 makes both vanish
/// at t = T); a genuinely vanishing phi under nonzero chi is an error.
double safe_ratio(double chi, double phi, const char* who) {
    if (std::abs(phi) >= kPhiFloor) return -chi / phi;
    if (std::abs(chi) < 1e-9) return 0.0;
    throw std::runtime_error(std::string(who) + " vanishes");
}

}  // namespace

MeanFieldTrajectory mean_inventory_trajectory(const RiccatiTables& tables, const ParamSet& p) {
    const std::size_t n = tables.grid.n_intervals;
    const double h = tables.grid.step;
    const double ka2 = 2.0 * p.kappa_a;
    const double kn2 = 2.0 * p.kappa_n;
    const Coefficients c = derive_coefficients(p);

    MeanFieldTrajectory tr;
    tr.grid = tables.grid;
    tr.Q_bar_a.resize(n + 1);
    tr.Q_bar_n.resize(n + 1);
    tr.V_bar.resize(n + 1);
    tr.V_bar_mid.resize(n);

    double qa = p.q0_a, qn = p.q0_n;
    tr.Q_bar_a[0] = qa;
    tr.Q_bar_n[0] = qn;
    tr.V_bar[0] = qa + qn;

    const auto rhs = [&](double ya, double yn, double pb, double cb, double& da, double& dn) {
        const double v = pb * (ya + yn) + cb;
        da = -v / ka2;
        dn = -v / kn2;
    };

    for (std::size_t k = 0; k < n; ++k) {
        const double pb0 = tables.phi_bar[k], cb0 = tables.chi_bar[k];
        const double pbm = tables.phi_bar_mid[k], cbm = tables.chi_bar_mid[k];
        const double pb1 = tables.phi_bar[k + 1], cb1 = tables.chi_bar[k + 1];
        double a1, n1, a2, n2, a3, n3, a4, n4;
        rhs(qa, qn, pb0, cb0, a1, n1);
        rhs(qa + 0.5 * h * a1, qn + 0.5 * h * n1, pbm, cbm, a2, n2);
        rhs(qa + 0.5 * h * a2, qn + 0.5 * h * n2, pbm, cbm, a3, n3);
        rhs(qa + h * a3, qn + h * n3, pb1, cb1, a4, n4);
        // half-step state for midpoint output (locally third order is plenty)
        tr.V_bar_mid[k] = (qa + qn) + 0.5 * h * 0.5 * ((a1 + n1) + (a2 + n2));
        qa += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        qn += h / 6.0 * (n1 + 2.0 * n2 + 2.0 * n3 + n4);
        tr.Q_bar_a[k + 1] = qa;
        tr.Q_bar_n[k + 1] = qn;
        tr.V_bar[k + 1] = qa + qn;
    }

    tr.v_bar.resize(n + 1);
    tr.chi_self.resize(n + 1);
    tr.theta_fn.resize(n + 1);
    tr.f_fn.resize(n + 1);
    tr.beta_fn.resize(n + 1);
    tr.g_fn.resize(n + 1);
    tr.price_drift.resize(n + 1);
    tr.mean_nu_a.resize(n + 1);
    tr.mean_nu_n.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double pb = tables.phi_bar[k], cb = tables.chi_bar[k];
        const double ps = tables.phi_self[k];
        const double V = tr.V_bar[k];
        tr.v_bar[k] = pb * V + cb;
        tr.chi_self[k] = (pb - ps) * V + cb;
        tr.theta_fn[k] = c.B * pb;
        tr.f_fn[k] = safe_ratio(cb, pb, "phi_bar");
        tr.beta_fn[k] = c.B * ps;
        tr.g_fn[k] = safe_ratio(tr.chi_self[k], ps, "phi_self");
        tr.price_drift[k] = -c.D * tr.v_bar[k];
        tr.mean_nu_a[k] = -tr.v_bar[k] / ka2;
        tr.mean_nu_n[k] = -tr.v_bar[k] / kn2;
    }
    return tr;
}

std::pair<double, double> feedback_control(double t, double q_total,
                                           const MeanFieldTrajectory& traj,
                                           const RiccatiTables& tables, const ParamSet& p) {
    const double h = tables.grid.step;
    const double phi = lerp_table(tables.phi_self, h, t);
    const double phi_bar = lerp_table(tables.phi_bar, h, t);
    const double chi_bar = lerp_table(tables.chi_bar, h, t);
    const double V = lerp_table(traj.V_bar, traj.grid.step, t);
    const double bracket = phi * q_total + (phi_bar - phi) * V + chi_bar;
    return {-bracket / (2.0 * p.kappa_a), -bracket / (2.0 * p.kappa_n)};
}

std::vector<double> chi_self_quadrature(const RiccatiTables& tables,
                                        const MeanFieldTrajectory& traj, const ParamSet& p) {
    const Coefficients c = derive_coefficients(p);
    const std::size_t n = tables.grid.n_intervals;
    const double h = tables.grid.step;
    // inner exponent: D * integral of phi_self, precomputed cumulatively
    const std::vector<double> Phi = simpson_cumulative(tables.phi_self, h);
    std::vector<double> w(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        w[k] = traj.v_bar[k] * std::exp(-c.D * Phi[k]);
    }
    const std::vector<double> J = simpson_cumulative(w, h);
    std::vector<double> chi(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        chi[k] = c.D * std::exp(c.D * Phi[k]) * (J[n] - J[k]);
    }
    return chi;
}

std::vector<double> mean_total_quadrature_formula(const RiccatiTables& tables, const ParamSet& p) {
    const Coefficients c = derive_coefficients(p);
    const std::size_t n = tables.grid.n_intervals;
    const double h = tables.grid.step;
    std::vector<double> theta(n + 1), f(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        theta[k] = c.B * tables.phi_bar[k];
        f[k] = safe_ratio(tables.chi_bar[k], tables.phi_bar[k], "phi_bar");
    }
    const std::vector<double> Theta = simpson_cumulative(theta, h);
    const double offset = 0.5 * Theta[n];  // headroom against exp overflow
    std::vector<double> g(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        g[k] = std::exp(Theta[k] - offset) * theta[k] * f[k];
    }
    const std::vector<double> Ig = simpson_cumulative(g, h);
    const double v0 = p.q0_a + p.q0_n;
    std::vector<double> V(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        V[k] = std::exp(-Theta[k]) * v0 + std::exp(offset - Theta[k]) * Ig[k];
    }
    return V;
}

void write_trajectory_csv(const MeanFieldTrajectory& traj, const std::filesystem::path& file) {
    CsvTable t;
    t.add_column("t", traj.grid.t_values);
    t.add_column("V_bar", traj.V_bar);
    t.add_column("Q_bar_a", traj.Q_bar_a);
    t.add_column("Q_bar_n", traj.Q_bar_n);
    t.add_column("v_bar", traj.v_bar);
    t.add_column("chi_self", traj.chi_self);
    t.add_column("mean_nu_a", traj.mean_nu_a);
    t.add_column("mean_nu_n", traj.mean_nu_n);
    t.add_column("price_drift", traj.price_drift);
    t.write(file);
}

}  // namespace mfgexec
