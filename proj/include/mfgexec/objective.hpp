#pragma once

#include <map>
#include <string>
#include <vector>

#include "mfgexec/simulate.hpp"

namespace mfgexec {

struct ObjectiveEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    /// term name -> mean contribution; terms sum to value
    std::map<std::string, double> decomposition;
};

/// Monte Carlo estimate of J for the representative agent: sample mean of the
/// recorded per-path left-point integrals. Refuses ensembles that did not
/// record controls.
ObjectiveEstimate evaluate_objective(const PathEnsemble& ens, const ParamSet& p);

/// Same for one player of a finite-N population (expectation across common
/// draws; each draw also carries one realization of the player's own noise).
ObjectiveEstimate evaluate_objective(const PopulationEnsemble& ens, const ParamSet& p,
                                     std::size_t player = 0);

struct GapRow {
    std::size_t N = 0;
    std::string deviation_kind;
    double epsilon = 0.0;
    double J_eq = 0.0;
    double J_dev = 0.0;
    double gap = 0.0;        ///< J_dev - J_eq on common random numbers
    double std_error = 0.0;  ///< of the paired difference
    bool noise_dominated = false;  ///< |gap| < 2*std_error
};

struct GapCurve {
    std::vector<GapRow> rows;
    std::vector<std::size_t> Ns;
    std::vector<double> max_gap_raw;      ///< per N, max over deviations
    std::vector<double> max_gap_clamped;  ///< negatives clamped at 0
    /// log-log fit over Ns with strictly positive clamped gap. If fewer than
    /// 3 such points exist the curve vanished identically (no deviation ever
    /// profits); slope_finite is false and the decay bound holds a fortiori.
    double fitted_slope = 0.0;
    double slope_stderr = 0.0;
    bool slope_finite = false;
    int n_positive = 0;
};

/// For each N: simulate the population at equilibrium, then once per deviation
/// with player 1 deviated, on identical RNG streams; gap rows and the decay
/// fit of the clamped max gap.
GapCurve nash_gap_curve(const ParamSet& p, const RiccatiTables& tables,
                        const MeanFieldTrajectory& traj, const std::vector<std::size_t>& Ns,
                        const std::vector<ControlDeviation>& deviations, const SimConfig& cfg);

}  // namespace mfgexec
