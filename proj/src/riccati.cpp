#include "mfgexec/riccati.hpp"

#include <array>
#include <cmath>
#include <fstream>

#include "mfgexec/csv.hpp"
#include "mfgexec/numerics.hpp"

namespace mfgexec {

namespace {

constexpr double kBlowUp = 1e12;

struct MeanRhs {
    double ka2, kn2, aa, an, two_phi;
    std::array<double, 4> operator()(const std::array<double, 4>& y) const {
        const auto [pb, cb, zb, eb] = y;
        return {pb * pb / ka2 + zb * pb / kn2 - aa / ka2 * pb - an / kn2 * zb - two_phi,
                (pb - aa) / ka2 * cb + (pb - an) / kn2 * eb,
                zb * zb / kn2 + zb * pb / ka2 - an / kn2 * zb - aa / ka2 * pb - two_phi,
                (zb - aa) / ka2 * cb + (zb - an) / kn2 * eb};
    }
};

struct SelfRhs {
    double ka2, kn2, two_phi;
    std::array<double, 2> operator()(const std::array<double, 2>& y) const {
        const auto [p, z] = y;
        return {p * p / ka2 + z * p / kn2 - two_phi, z * z / kn2 + z * p / ka2 - two_phi};
    }
};

template <std::size_t N, class Rhs>
std::array<double, N> axpy(const std::array<double, N>& y, double a, const std::array<double, N>& d) {
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + a * d[i];
    return out;
}

/// Backward classical RK4 on the half-step grid; writes node values (even
/// half-indices) and midpoint values (odd half-indices).
template <std::size_t N, class Rhs>
void integrate_backward(const Rhs& rhs, const std::array<double, N>& terminal, const TimeGrid& grid,
                        std::array<std::vector<double>*, N> nodes,
                        std::array<std::vector<double>*, N> mids) {
    const std::size_t n = grid.n_intervals;
    const std::size_t m = 2 * n;
    const double h = grid.horizon / static_cast<double>(m);
    for (std::size_t i = 0; i < N; ++i) {
        nodes[i]->assign(n + 1, 0.0);
        mids[i]->assign(n, 0.0);
    }
    std::array<double, N> y = terminal;
    for (std::size_t i = 0; i < N; ++i) (*nodes[i])[n] = y[i];
    for (std::size_t k = m; k > 0; --k) {
        const auto k1 = rhs(y);
        const auto k2 = rhs(axpy<N, Rhs>(y, -h / 2.0, k1));
        const auto k3 = rhs(axpy<N, Rhs>(y, -h / 2.0, k2));
        const auto k4 = rhs(axpy<N, Rhs>(y, -h, k3));
        for (std::size_t i = 0; i < N; ++i) {
            y[i] -= h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if (!(std::abs(y[i]) < kBlowUp)) {
                throw BlowUpError("Riccati blow-up", grid.horizon * static_cast<double>(k - 1) /
                                                         static_cast<double>(m));
            }
        }
        const std::size_t half_idx = k - 1;
        if (half_idx % 2 == 0) {
            for (std::size_t i = 0; i < N; ++i) (*nodes[i])[half_idx / 2] = y[i];
        } else {
            for (std::size_t i = 0; i < N; ++i) (*mids[i])[half_idx / 2] = y[i];
        }
    }
}

/// The printed Riccati closed form, shared shape for (C, delta±) and (D, gamma±).
double printed_closed_form(double t, double T, double psi, double B, double num_const,
                           double rp, double rm) {
    const double x = (rp - rm) * (T - t);
    const double two_psi = 2.0 * psi;
    if (x <= 300.0) {
        const double e = std::exp(x);
        const double num = -num_const * (e - 1.0) - two_psi * (rp * e - rm);
        const double den = (rm * e - rp) - two_psi * B * (e - 1.0);
        return num / den;
    }
    // rescale by e^{-x}: both exponentials would overflow past exponent 300
    const double ei = std::exp(-x);
    const double num = -num_const * (1.0 - ei) - two_psi * (rp - rm * ei);
    const double den = (rm - rp * ei) - two_psi * B * (1.0 - ei);
    return num / den;
}

}  // namespace

RiccatiTables solve_mean_system_oracle(const ParamSet& p, const TimeGrid& grid) {
    RiccatiTables t;
    t.grid = grid;
    t.source = TableSource::ode_oracle;
    const MeanRhs rhs{2.0 * p.kappa_a, 2.0 * p.kappa_n, p.alpha_a, p.alpha_n, 2.0 * p.phi_run};
    const std::array<double, 4> terminal = {2.0 * p.psi, -2.0 * p.psi * p.q_target, 2.0 * p.psi,
                                            -2.0 * p.psi * p.q_target};
    integrate_backward<4>(rhs, terminal, grid,
                          {&t.phi_bar, &t.chi_bar, &t.zeta_bar, &t.eta_bar},
                          {&t.phi_bar_mid, &t.chi_bar_mid, &t.zeta_bar_mid, &t.eta_bar_mid});
    return t;
}

RiccatiTables solve_self_system_oracle(const ParamSet& p, const TimeGrid& grid) {
    RiccatiTables t;
    t.grid = grid;
    t.source = TableSource::ode_oracle;
    const SelfRhs rhs{2.0 * p.kappa_a, 2.0 * p.kappa_n, 2.0 * p.phi_run};
    const std::array<double, 2> terminal = {2.0 * p.psi, 2.0 * p.psi};
    integrate_backward<2>(rhs, terminal, grid, {&t.phi_self, &t.zeta_self},
                          {&t.phi_self_mid, &t.zeta_self_mid});
    return t;
}

RiccatiTables solve_oracle(const ParamSet& p, const TimeGrid& grid) {
    RiccatiTables t = solve_mean_system_oracle(p, grid);
    RiccatiTables s = solve_self_system_oracle(p, grid);
    t.phi_self = std::move(s.phi_self);
    t.zeta_self = std::move(s.zeta_self);
    t.phi_self_mid = std::move(s.phi_self_mid);
    t.zeta_self_mid = std::move(s.zeta_self_mid);
    return t;
}

double phi_bar_closed_form(double t, const ParamSet& p, const Coefficients& c) {
    return printed_closed_form(t, p.horizon, p.psi, c.B, c.C, c.delta_plus, c.delta_minus);
}

double phi_self_closed_form(double t, const ParamSet& p, const Coefficients& c) {
    return printed_closed_form(t, p.horizon, p.psi, c.B, c.D, c.gamma_plus, c.gamma_minus);
}

std::vector<double> chi_bar_from_phibar(const RiccatiTables& tables, const ParamSet& p) {
    const Coefficients c = derive_coefficients(p);
    const std::size_t n = tables.grid.n_intervals;
    std::vector<double> integrand(n + 1);
    for (std::size_t k = 0; k <= n; ++k) integrand[k] = c.B * tables.phi_bar[k] - c.D;
    const std::vector<double> I0t = simpson_cumulative(integrand, tables.grid.step);
    std::vector<double> chi(n + 1);
    const double IT = I0t[n];
    for (std::size_t k = 0; k <= n; ++k) {
        chi[k] = -2.0 * p.psi * p.q_target * std::exp(-(IT - I0t[k]));
    }
    return chi;
}

void write_riccati_csv(const RiccatiTables& tables, const std::filesystem::path& file) {
    std::string out = "t,phi_bar,zeta_bar,chi_bar,eta_bar,phi_self,zeta_self,source\n";
    const char* src = tables.source == TableSource::ode_oracle ? "ode_oracle" : "closed_form";
    for (std::size_t k = 0; k < tables.grid.n_nodes(); ++k) {
        out += format_double(tables.grid.t_values[k]);
        out += ',';
        out += format_double(tables.phi_bar[k]);
        out += ',';
        out += format_double(tables.zeta_bar[k]);
        out += ',';
        out += format_double(tables.chi_bar[k]);
        out += ',';
        out += format_double(tables.eta_bar[k]);
        out += ',';
        out += format_double(tables.phi_self[k]);
        out += ',';
        out += format_double(tables.zeta_self[k]);
        out += ',';
        out += src;
        out += '\n';
    }
    write_text_file(file, out);
}

}  // namespace mfgexec
