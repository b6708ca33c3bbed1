#include "mfgexec/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "mfgexec/numerics.hpp"

namespace mfgexec {

namespace {

/// Full analytic pipeline for one parameter set; throws ValidationError on
/// invalid cells, which sweeps catch and record.
MeanFieldTrajectory analytic_cell(const ParamSet& p, std::size_t grid_intervals) {
    const ParamSet v = validate_params(p);
    const TimeGrid grid = TimeGrid::uniform(v.horizon, grid_intervals);
    const RiccatiTables tables = solve_oracle(v, grid);
    return mean_inventory_trajectory(tables, v);
}

double peak_abs(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    for (double x : b) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

SweepResult sweep_kappa_ratio(const ParamSet& base, const std::vector<double>& ratios,
                              const SimConfig& cfg, std::size_t grid_intervals) {
    SweepResult out;
    out.axis = "kappa_ratio";
    out.values = ratios;
    out.cfg = cfg;
    out.grid = TimeGrid::uniform(base.horizon, grid_intervals);
    for (double r : ratios) {
        SweepCell cell;
        cell.axis_value = r;
        ParamSet p = base;
        p.kappa_n = 2e-3;
        p.kappa_a = r * p.kappa_n;
        cell.params = p;
        try {
            const MeanFieldTrajectory tr = analytic_cell(p, grid_intervals);
            cell.metric.resize(tr.grid.n_nodes());
            for (std::size_t k = 0; k < tr.grid.n_nodes(); ++k) {
                cell.metric[k] = tr.Q_bar_a[k] - tr.Q_bar_n[k];
            }
            cell.terminal_metric = cell.metric.back();
            cell.peak_abs_control = peak_abs(tr.mean_nu_a, tr.mean_nu_n);
            cell.valid = true;
        } catch (const ValidationError& e) {
            cell.error = e.what();
        }
        out.cells.push_back(std::move(cell));
    }
    return out;
}

SweepResult penalty_sweep(const ParamSet& base, PenaltyField which,
                          const std::vector<double>& values, const SimConfig& cfg,
                          std::size_t grid_intervals) {
    SweepResult out;
    out.axis = which == PenaltyField::phi_run ? "phi_run" : "psi";
    out.values = values;
    out.cfg = cfg;
    out.grid = TimeGrid::uniform(base.horizon, grid_intervals);
    for (double v : values) {
        SweepCell cell;
        cell.axis_value = v;
        ParamSet p = base;
        if (which == PenaltyField::phi_run) {
            p.phi_run = v;
        } else {
            p.psi = v;
        }
        cell.params = p;
        try {
            const MeanFieldTrajectory tr = analytic_cell(p, grid_intervals);
            cell.metric = tr.V_bar;
            cell.terminal_metric = tr.V_bar.back();
            cell.peak_abs_control = peak_abs(tr.mean_nu_a, tr.mean_nu_n);
            cell.valid = true;
        } catch (const ValidationError& e) {
            cell.error = e.what();
        }
        out.cells.push_back(std::move(cell));
    }
    return out;
}

TurnpikeReport turnpike_detect(const MeanFieldTrajectory& traj, const TurnpikeThresholds& th,
                               double q_target) {
    TurnpikeReport rep;
    rep.thresholds = th;
    const std::size_t n = traj.grid.n_intervals;
    const double T = traj.grid.horizon;
    const std::size_t lo = n / 3, hi = 2 * n / 3;
    std::vector<double> middle(traj.V_bar.begin() + static_cast<std::ptrdiff_t>(lo),
                               traj.V_bar.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    rep.plateau_level = median_of(middle);
    for (double v : middle) {
        rep.plateau_max_deviation = std::max(rep.plateau_max_deviation,
                                             std::abs(v - rep.plateau_level));
    }
    const double tol_abs = q_target != 0.0 ? th.tol_abs_frac * std::abs(q_target)
                                           : th.tol_abs_floor;
    const double tol = tol_abs + th.tol_rel * std::abs(rep.plateau_level);
    std::optional<std::size_t> first, last;
    for (std::size_t k = 0; k <= n; ++k) {
        if (std::abs(traj.V_bar[k] - rep.plateau_level) <= tol) {
            if (!first) first = k;
            last = k;
        }
    }
    if (first) {
        rep.entry_time = traj.grid.t_values[*first];
        rep.exit_time = traj.grid.t_values[*last];
        rep.has_turnpike = (*rep.exit_time - *rep.entry_time) >= 0.5 * T;
    }
    return rep;
}

ChaosResult chaos_convergence_study(const ParamSet& base, const std::vector<std::size_t>& Ns,
                                    const SimConfig& cfg, std::size_t grid_intervals) {
    const ParamSet p = validate_params(base);
    const TimeGrid grid = TimeGrid::uniform(p.horizon, grid_intervals);
    const RiccatiTables tables = solve_oracle(p, grid);
    const MeanFieldTrajectory traj = mean_inventory_trajectory(tables, p);

    ChaosResult out;
    out.Ns = Ns;
    for (std::size_t N : Ns) {
        SimConfig c = cfg;
        c.population_n = N;
        c.record_controls = false;  // only the cross-player means are needed
        const PopulationEnsemble ens = simulate_population(p, tables, traj, c);
        std::vector<double> sup_a(ens.draws.size()), sup_n(ens.draws.size());
        for (std::size_t d = 0; d < ens.draws.size(); ++d) {
            sup_a[d] = ens.draws[d].sup_mismatch_a;
            sup_n[d] = ens.draws[d].sup_mismatch_n;
        }
        out.mean_sup_a.push_back(mean_of(sup_a));
        out.mean_sup_n.push_back(mean_of(sup_n));
    }
    std::vector<double> lx, la, ln;
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        lx.push_back(std::log(static_cast<double>(Ns[i])));
        la.push_back(std::log(out.mean_sup_a[i]));
        ln.push_back(std::log(out.mean_sup_n[i]));
    }
    out.slope_a = fit_line(lx, la).slope;
    out.slope_n = fit_line(lx, ln).slope;
    return out;
}

}  // namespace mfgexec
