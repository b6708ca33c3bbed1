#include "mfgexec/objective.hpp"

#include <cmath>
#include <stdexcept>

#include "mfgexec/numerics.hpp"

namespace mfgexec {

namespace {

ObjectiveEstimate estimate_from_components(const std::vector<ObjectiveComponents>& comps) {
    ObjectiveEstimate est;
    est.n_paths = comps.size();
    std::vector<double> totals(comps.size());
    std::vector<double> term(comps.size());
    const auto mean_term = [&](auto member) {
        for (std::size_t i = 0; i < comps.size(); ++i) term[i] = comps[i].*member;
        return mean_of(term);
    };
    for (std::size_t i = 0; i < comps.size(); ++i) totals[i] = comps[i].total();
    est.value = mean_of(totals);
    est.std_error = comps.size() > 1
                        ? sample_sd(totals) / std::sqrt(static_cast<double>(comps.size()))
                        : 0.0;
    est.decomposition["terminal_wealth"] = mean_term(&ObjectiveComponents::terminal_wealth);
    est.decomposition["terminal_penalty"] = mean_term(&ObjectiveComponents::terminal_penalty);
    est.decomposition["running_penalty"] = mean_term(&ObjectiveComponents::running_penalty);
    est.decomposition["cost_a"] = mean_term(&ObjectiveComponents::cost_a);
    est.decomposition["cost_n"] = mean_term(&ObjectiveComponents::cost_n);
    est.decomposition["price_payment"] = mean_term(&ObjectiveComponents::price_payment);
    return est;
}

}  // namespace

ObjectiveEstimate evaluate_objective(const PathEnsemble& ens, const ParamSet&) {
    if (!ens.has_controls) {
        throw std::invalid_argument("objective evaluation requires recorded controls");
    }
    std::vector<ObjectiveComponents> comps;
    comps.reserve(ens.records.size());
    for (const auto& r : ens.records) comps.push_back(r.obj);
    return estimate_from_components(comps);
}

ObjectiveEstimate evaluate_objective(const PopulationEnsemble& ens, const ParamSet&,
                                     std::size_t player) {
    if (!ens.has_controls) {
        throw std::invalid_argument("objective evaluation requires recorded controls");
    }
    if (ens.draws.empty() || player >= ens.population_n) {
        throw std::invalid_argument("player index out of range");
    }
    std::vector<ObjectiveComponents> comps;
    comps.reserve(ens.draws.size());
    for (const auto& d : ens.draws) comps.push_back(d.obj.at(player));
    return estimate_from_components(comps);
}

GapCurve nash_gap_curve(const ParamSet& p, const RiccatiTables& tables,
                        const MeanFieldTrajectory& traj, const std::vector<std::size_t>& Ns,
                        const std::vector<ControlDeviation>& deviations, const SimConfig& cfg) {
    if (deviations.empty()) throw std::invalid_argument("nash_gap_curve needs deviations");
    GapCurve curve;
    curve.Ns = Ns;
    for (std::size_t N : Ns) {
        SimConfig c = cfg;
        c.population_n = N;
        c.record_controls = true;
        const PopulationEnsemble eq = simulate_population(p, tables, traj, c);
        std::vector<double> j_eq(eq.draws.size());
        for (std::size_t d = 0; d < eq.draws.size(); ++d) j_eq[d] = eq.draws[d].obj[0].total();
        const double J_eq = mean_of(j_eq);

        double best = -std::numeric_limits<double>::infinity();
        for (const auto& dev : deviations) {
            // identical master seed: equilibrium and deviated runs consume the
            // same increments, only player 1's control law differs
            const PopulationEnsemble dv = simulate_population(p, tables, traj, c, dev);
            std::vector<double> diff(dv.draws.size());
            for (std::size_t d = 0; d < dv.draws.size(); ++d) {
                diff[d] = dv.draws[d].obj[0].total() - j_eq[d];
            }
            GapRow row;
            row.N = N;
            row.deviation_kind =
                dev.kind == ControlDeviation::Kind::gain_scale ? "gain_scale" : "rate_shift";
            row.epsilon = dev.epsilon;
            row.J_eq = J_eq;
            row.gap = mean_of(diff);
            row.J_dev = J_eq + row.gap;
            row.std_error = diff.size() > 1
                                ? sample_sd(diff) / std::sqrt(static_cast<double>(diff.size()))
                                : 0.0;
            row.noise_dominated = std::abs(row.gap) < 2.0 * row.std_error;
            best = std::max(best, row.gap);
            curve.rows.push_back(row);
        }
        curve.max_gap_raw.push_back(best);
        curve.max_gap_clamped.push_back(std::max(0.0, best));
    }

    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        if (curve.max_gap_clamped[i] > 0.0) {
            lx.push_back(std::log(static_cast<double>(Ns[i])));
            ly.push_back(std::log(curve.max_gap_clamped[i]));
        }
    }
    curve.n_positive = static_cast<int>(lx.size());
    if (curve.n_positive >= 3) {
        const LineFit fit = fit_line(lx, ly);
        curve.fitted_slope = fit.slope;
        curve.slope_stderr = fit.slope_stderr;
        curve.slope_finite = true;
    } else {
        curve.fitted_slope = -std::numeric_limits<double>::infinity();
        curve.slope_stderr = 0.0;
        curve.slope_finite = false;
    }
    return curve;
}

}  // namespace mfgexec
