#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "mfgexec/params.hpp"
#include "mfgexec/riccati.hpp"

namespace mfgexec {

/// Deterministic conditional-mean layer of the equilibrium: total and
/// per-channel mean inventories, the mean adjoint v̄, the self intercept χ,
/// the relaxation coefficients θ/f (mean) and β/g (self), mean controls and
/// the resulting mean price drift.
struct MeanFieldTrajectory {
    TimeGrid grid;
    std::vector<double> V_bar;      ///< Q̄_a + Q̄_n
    std::vector<double> Q_bar_a, Q_bar_n;
    std::vector<double> v_bar;      ///< φ̄ V̄ + χ̄
    std::vector<double> chi_self;   ///< (φ̄ − φ) V̄ + χ̄
    std::vector<double> theta_fn, f_fn, beta_fn, g_fn;
    std::vector<double> price_drift;  ///< −D v̄
    std::vector<double> mean_nu_a, mean_nu_n;
    std::vector<double> V_bar_mid;  ///< midpoint values, for half-step consumers
};

/// Forward RK4 of the per-channel mean inventories driven by the oracle
/// tables, from (q0_a, q0_n); fills every derived array.
MeanFieldTrajectory mean_inventory_trajectory(const RiccatiTables& tables, const ParamSet& p);

/// Equilibrium feedback rates (ν̂_a, ν̂_n) for a trader holding total
/// inventory q_total at time t; tables interpolated linearly between nodes.
std::pair<double, double> feedback_control(double t, double q_total,
                                           const MeanFieldTrajectory& traj,
                                           const RiccatiTables& tables, const ParamSet& p);

/// Diagnostic: χ via its nested-quadrature form (outer and inner composite
/// Simpson). Disagrees with the algebraic χ at t=T by construction; the gap is
/// reported by the validation command, not hidden.
std::vector<double> chi_self_quadrature(const RiccatiTables& tables,
                                        const MeanFieldTrajectory& traj, const ParamSet& p);

/// The integral-formula route for V̄ (homogeneous term added for nonzero
/// initial inventory), evaluated with composite Simpson on the grid. Used as
/// the second leg of the dual-method consistency check.
std::vector<double> mean_total_quadrature_formula(const RiccatiTables& tables, const ParamSet& p);

/// CSV export: t, V_bar, Q_bar_a, Q_bar_n, v_bar, chi_self, mean_nu_a,
/// mean_nu_n, price_drift.
void write_trajectory_csv(const MeanFieldTrajectory& traj, const std::filesystem::path& file);

}  // namespace mfgexec
