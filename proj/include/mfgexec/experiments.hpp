#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mfgexec/meanfield.hpp"
#include "mfgexec/params.hpp"
#include "mfgexec/simulate.hpp"

namespace mfgexec {

/// One cell of a parameter sweep; the exact ParamSet used is recorded so the
/// cell is reproducible in isolation.
struct SweepCell {
    double axis_value = 0.0;
    ParamSet params;
    bool valid = false;
    std::string error;                ///< validation message when !valid
    std::vector<double> metric;       ///< per grid node
    double terminal_metric = 0.0;
    double peak_abs_control = 0.0;    ///< max |mean control| over both channels
};

struct SweepResult {
    std::string axis;  ///< swept parameter name
    std::vector<double> values;
    TimeGrid grid;
    std::vector<SweepCell> cells;
    SimConfig cfg;
};

/// kappa_n pinned at 2e-3; kappa_a = ratio * kappa_n per cell. The metric is
/// the analytic mean inventory difference Q̄_a - Q̄_n.
SweepResult sweep_kappa_ratio(const ParamSet& base, const std::vector<double>& ratios,
                              const SimConfig& cfg, std::size_t grid_intervals);

enum class PenaltyField { phi_run, psi };

/// Metric is the analytic V̄ path; terminal_metric is V̄_T.
SweepResult penalty_sweep(const ParamSet& base, PenaltyField which,
                          const std::vector<double>& values, const SimConfig& cfg,
                          std::size_t grid_intervals);

struct TurnpikeThresholds {
    double tol_abs_frac = 0.02;   ///< tol_abs = frac * |q_target| ...
    double tol_abs_floor = 1.0;   ///< ... or this, when q_target = 0
    double tol_rel = 0.02;        ///< plus tol_rel * |plateau|
};

struct TurnpikeReport {
    std::optional<double> entry_time;
    std::optional<double> exit_time;
    double plateau_level = 0.0;          ///< median of V̄ over the middle third
    double plateau_max_deviation = 0.0;  ///< max |V̄ - plateau| over the middle third
    bool has_turnpike = false;           ///< both times present and width >= T/2
    TurnpikeThresholds thresholds;
};

TurnpikeReport turnpike_detect(const MeanFieldTrajectory& traj, const TurnpikeThresholds& th,
                               double q_target);

struct ChaosResult {
    std::vector<std::size_t> Ns;
    std::vector<double> mean_sup_a;  ///< cross-draw mean of sup_t mismatch, a-channel
    std::vector<double> mean_sup_n;
    double slope_a = 0.0;  ///< log-log decay fit
    double slope_n = 0.0;
};

/// Propagation-of-chaos study: per common draw, sup_t |(1/N) Σ_j 2ν_j - 2 mean ν(t)|
/// per channel, averaged across draws, with log-log decay fits over the Ns.
ChaosResult chaos_convergence_study(const ParamSet& base, const std::vector<std::size_t>& Ns,
                                    const SimConfig& cfg, std::size_t grid_intervals);

}  // namespace mfgexec
