#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mfgexec/meanfield.hpp"
#include "mfgexec/params.hpp"
#include "mfgexec/riccati.hpp"

namespace mfgexec {

struct SimConfig {
    std::size_t n_steps = 2000;    ///< uniform dt = horizon / n_steps
    std::size_t n_paths = 1;       ///< representative-agent paths (MFG mode)
    std::size_t n_common = 1;      ///< distinct common-noise draws
    std::uint64_t master_seed = 0;
    std::size_t population_n = 1;  ///< N, finite-player mode only
    bool store_paths = false;      ///< keep full per-step arrays (large)
    bool record_controls = true;   ///< accumulate objective integrals
    int workers = 1;
};

std::uint64_t sim_config_digest(const SimConfig& cfg);

/// A unilateral deviation applied to player 1. gain_scale multiplies both
/// feedback brackets by (1+epsilon); rate_shift adds epsilon*q_target/T to
/// both rates.
struct ControlDeviation {
    enum class Kind { gain_scale, rate_shift };
    Kind kind = Kind::gain_scale;
    double epsilon = 0.0;
};

/// Left-point Riemann pieces of the objective along one path; they sum to J.
struct ObjectiveComponents {
    double terminal_wealth = 0.0;   ///< (Q_a_T + Q_n_T) S_T
    double terminal_penalty = 0.0;  ///< -psi (Q_T - q_target)^2
    double running_penalty = 0.0;   ///< -phi_run ∫ (Q_a+Q_n)^2 dt
    double cost_a = 0.0;            ///< -kappa_a ∫ nu_a^2 dt
    double cost_n = 0.0;            ///< -kappa_n ∫ nu_n^2 dt
    double price_payment = 0.0;     ///< -∫ (nu_a+nu_n) S dt

    double total() const {
        return terminal_wealth + terminal_penalty + running_penalty + cost_a + cost_n +
               price_payment;
    }
};

struct PathRecord {
    double S_T = 0.0, Q_a_T = 0.0, Q_n_T = 0.0;
    ObjectiveComponents obj;
    std::uint32_t common_index = 0;
    std::uint64_t stream_id = 0;
};

struct PathEnsemble {
    double horizon = 0.0;
    std::size_t n_steps = 0;
    double dt = 0.0;
    std::vector<PathRecord> records;
    bool has_controls = false;
    bool has_paths = false;
    // full paths, [path][step]; nu arrays have n_steps entries (left points)
    std::vector<std::vector<double>> S, Q_a, Q_n, nu_a, nu_n;
    std::uint64_t params_digest = 0, config_digest = 0;
};

/// Euler–Maruyama under the equilibrium feedback controls with left-point
/// (predictable) evaluation; the price drifts by the analytic conditional-mean
/// term -D*v̄(t). Deterministic in (params, tables, cfg) for any worker count.
PathEnsemble simulate_mfg_paths(const ParamSet& p, const RiccatiTables& tables,
                                const MeanFieldTrajectory& traj, const SimConfig& cfg);

struct DrawSummary {
    std::uint32_t common_index = 0;
    double S_T = 0.0;
    std::vector<ObjectiveComponents> obj;  ///< per player
    std::vector<double> terminal_q_total;  ///< per player
    std::vector<double> mean_q_total;      ///< cross-player mean, per node
    std::vector<double> mean_nu_a;         ///< cross-player mean, left points
    std::vector<double> mean_nu_n;
    double sup_mismatch_a = 0.0;  ///< sup_t |mean 2nu_a - 2 mean_nu_a(t)|
    double sup_mismatch_n = 0.0;
};

struct PopulationEnsemble {
    double horizon = 0.0;
    std::size_t n_steps = 0, population_n = 0;
    double dt = 0.0;
    std::optional<ControlDeviation> deviation;
    std::vector<DrawSummary> draws;
    bool has_controls = false;
    bool has_paths = false;
    std::vector<std::vector<double>> S_paths;  ///< [draw][node], when stored
    std::uint64_t params_digest = 0, config_digest = 0;
};

/// Finite-N population under the mean-field feedback controls, with the price
/// drift driven by the realized population-average trading rates each step
/// (endogenous). All players share one common stream per draw; player 1
/// applies `deviation` when supplied.
PopulationEnsemble simulate_population(const ParamSet& p, const RiccatiTables& tables,
                                       const MeanFieldTrajectory& traj, const SimConfig& cfg,
                                       const std::optional<ControlDeviation>& deviation = {});

struct ConditionalMeans {
    std::vector<std::vector<double>> mean_q_total;  ///< [draw][node]
    std::vector<std::vector<double>> mean_nu_a, mean_nu_n;
    std::vector<double> dispersion_q;  ///< cross-draw sd of mean_q_total per node
};

ConditionalMeans estimate_conditional_means(const PopulationEnsemble& ens);

/// Optional path dump: path_id, common_id, t, S, Q_a, Q_n, nu_a, nu_n.
void write_paths_csv(const PathEnsemble& ens, const std::filesystem::path& file);

}  // namespace mfgexec
