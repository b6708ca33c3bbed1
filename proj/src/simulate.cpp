#include "mfgexec/simulate.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "mfgexec/csv.hpp"
#include "mfgexec/numerics.hpp"
#include "mfgexec/rng.hpp"

namespace mfgexec {

namespace {

void fnv_mix(std::uint64_t& h, std::uint64_t bits) {
    for (int i = 0; i < 8; ++i) {
        h ^= (bits >> (8 * i)) & 0xffu;
        h *= 0x100000001b3ull;
    }
}

/// Index-sharded parallel loop; item i is processed by exactly one worker and
/// results must be written to slot i, so output is independent of scheduling.
template <class Fn>
void parallel_for(std::size_t n_items, int workers, const Fn& fn) {
    if (workers <= 1 || n_items <= 1) {
        for (std::size_t i = 0; i < n_items; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_items) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = static_cast<int>(std::min<std::size_t>(workers, n_items));
    pool.reserve(n_threads);
    for (int w = 0; w < n_threads; ++w) pool.emplace_back(run);
    for (auto& th : pool) th.join();
}

/// Per-step coefficient tables sampled from the dense analytic grid.
struct StepTables {
    std::vector<double> phi;        // phi_self(t_k)
    std::vector<double> mix;        // (phi_bar - phi) V_bar + chi_bar at t_k
    std::vector<double> drift;      // -D v_bar(t_k): analytic mean price drift
    std::vector<double> mean_nu_a;  // analytic mean controls at t_k
    std::vector<double> mean_nu_n;
};

StepTables sample_step_tables(const ParamSet& p, const RiccatiTables& tables,
                              const MeanFieldTrajectory& traj, std::size_t n_steps) {
    if (traj.grid.n_intervals < n_steps) {
        throw std::invalid_argument("trajectory grid must be at least as fine as the simulation grid");
    }
    StepTables st;
    st.phi.resize(n_steps);
    st.mix.resize(n_steps);
    st.drift.resize(n_steps);
    st.mean_nu_a.resize(n_steps);
    st.mean_nu_n.resize(n_steps);
    const double dt = p.horizon / static_cast<double>(n_steps);
    const double h = tables.grid.step;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = dt * static_cast<double>(k);
        const double phi = lerp_table(tables.phi_self, h, t);
        const double phi_bar = lerp_table(tables.phi_bar, h, t);
        const double chi_bar = lerp_table(tables.chi_bar, h, t);
        const double V = lerp_table(traj.V_bar, traj.grid.step, t);
        st.phi[k] = phi;
        st.mix[k] = (phi_bar - phi) * V + chi_bar;
        st.drift[k] = lerp_table(traj.price_drift, traj.grid.step, t);
        st.mean_nu_a[k] = lerp_table(traj.mean_nu_a, traj.grid.step, t);
        st.mean_nu_n[k] = lerp_table(traj.mean_nu_n, traj.grid.step, t);
    }
    return st;
}

std::vector<std::vector<double>> common_increments(const SimConfig& cfg, double sigma_0,
                                                   const rng::KeyedGenerator& gen) {
    std::vector<std::vector<double>> z(cfg.n_common, std::vector<double>(cfg.n_steps, 0.0));
    if (sigma_0 <= 0.0) return z;  // counter-based draws: skipping is consistent
    for (std::size_t c = 0; c < cfg.n_common; ++c) {
        rng::PairedStream s{&gen, static_cast<std::uint32_t>(c), 0, rng::kCommon, 0.0};
        for (std::size_t k = 0; k < cfg.n_steps; ++k) {
            z[c][k] = s.at_step(static_cast<std::uint32_t>(k));
        }
    }
    return z;
}

void apply_deviation(const ControlDeviation& dev, const ParamSet& p, double& nu_a, double& nu_n) {
    switch (dev.kind) {
        case ControlDeviation::Kind::gain_scale:
            nu_a *= (1.0 + dev.epsilon);
            nu_n *= (1.0 + dev.epsilon);
            break;
        case ControlDeviation::Kind::rate_shift: {
            const double shift = dev.epsilon * p.q_target / p.horizon;
            nu_a += shift;
            nu_n += shift;
            break;
        }
    }
}

}  // namespace

std::uint64_t sim_config_digest(const SimConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    fnv_mix(h, cfg.n_steps);
    fnv_mix(h, cfg.n_paths);
    fnv_mix(h, cfg.n_common);
    fnv_mix(h, cfg.master_seed);
    fnv_mix(h, cfg.population_n);
    fnv_mix(h, cfg.store_paths ? 1 : 0);
    fnv_mix(h, cfg.record_controls ? 1 : 0);
    return h;
}

PathEnsemble simulate_mfg_paths(const ParamSet& p, const RiccatiTables& tables,
                                const MeanFieldTrajectory& traj, const SimConfig& cfg) {
    if (cfg.n_steps < 1 || cfg.n_paths < 1 || cfg.n_common < 1) {
        throw std::invalid_argument("simulation counts must be >= 1");
    }
    const std::size_t n = cfg.n_steps;
    const double dt = p.horizon / static_cast<double>(n);
    const double sqdt = std::sqrt(dt);
    const StepTables st = sample_step_tables(p, tables, traj, n);
    const rng::KeyedGenerator gen(cfg.master_seed);
    const auto zc = common_increments(cfg, p.sigma_0, gen);

    PathEnsemble ens;
    ens.horizon = p.horizon;
    ens.n_steps = n;
    ens.dt = dt;
    ens.has_controls = cfg.record_controls;
    ens.has_paths = cfg.store_paths;
    ens.records.resize(cfg.n_paths);
    if (cfg.store_paths) {
        ens.S.resize(cfg.n_paths);
        ens.Q_a.resize(cfg.n_paths);
        ens.Q_n.resize(cfg.n_paths);
        ens.nu_a.resize(cfg.n_paths);
        ens.nu_n.resize(cfg.n_paths);
    }
    ens.params_digest = param_digest(p);
    ens.config_digest = sim_config_digest(cfg);

    const double ka2 = 2.0 * p.kappa_a, kn2 = 2.0 * p.kappa_n;

    parallel_for(cfg.n_paths, cfg.workers, [&](std::size_t path) {
        const auto c = static_cast<std::uint32_t>(path % cfg.n_common);
        const auto pid = static_cast<std::uint32_t>(path);
        rng::PairedStream sa{&gen, c, pid, rng::kIdioA, 0.0};
        rng::PairedStream sn{&gen, c, pid, rng::kIdioN, 0.0};
        double S = p.s0, qa = p.q0_a, qn = p.q0_n;
        ObjectiveComponents obj;
        std::vector<double>*Sp = nullptr, *Qap = nullptr, *Qnp = nullptr, *nap = nullptr,
                           *nnp = nullptr;
        if (cfg.store_paths) {
            Sp = &ens.S[path];
            Qap = &ens.Q_a[path];
            Qnp = &ens.Q_n[path];
            nap = &ens.nu_a[path];
            nnp = &ens.nu_n[path];
            Sp->reserve(n + 1);
            Qap->reserve(n + 1);
            Qnp->reserve(n + 1);
            nap->reserve(n);
            nnp->reserve(n);
            Sp->push_back(S);
            Qap->push_back(qa);
            Qnp->push_back(qn);
        }
        for (std::size_t k = 0; k < n; ++k) {
            const double q = qa + qn;
            const double bracket = st.phi[k] * q + st.mix[k];
            const double nu_a = -bracket / ka2;
            const double nu_n = -bracket / kn2;
            if (cfg.record_controls) {
                obj.running_penalty += dt * (-p.phi_run * q * q);
                obj.cost_a += dt * (-p.kappa_a * nu_a * nu_a);
                obj.cost_n += dt * (-p.kappa_n * nu_n * nu_n);
                obj.price_payment += dt * (-(nu_a + nu_n) * S);
            }
            const auto ks = static_cast<std::uint32_t>(k);
            S += dt * st.drift[k] + p.sigma_0 * sqdt * zc[c][k];
            qa += dt * nu_a;
            if (p.sigma_a > 0.0) qa += p.sigma_a * sqdt * sa.at_step(ks);
            qn += dt * nu_n;
            if (p.sigma_n > 0.0) qn += p.sigma_n * sqdt * sn.at_step(ks);
            if (cfg.store_paths) {
                nap->push_back(nu_a);
                nnp->push_back(nu_n);
                Sp->push_back(S);
                Qap->push_back(qa);
                Qnp->push_back(qn);
            }
        }
        PathRecord& rec = ens.records[path];
        rec.S_T = S;
        rec.Q_a_T = qa;
        rec.Q_n_T = qn;
        if (cfg.record_controls) {
            obj.terminal_wealth = (qa + qn) * S;
            const double miss = qa + qn - p.q_target;
            obj.terminal_penalty = -p.psi * miss * miss;
            rec.obj = obj;
        }
        rec.common_index = c;
        rec.stream_id = rng::stream_id(cfg.master_seed, c, pid, rng::kIdioA);
    });
    return ens;
}

PopulationEnsemble simulate_population(const ParamSet& p, const RiccatiTables& tables,
                                       const MeanFieldTrajectory& traj, const SimConfig& cfg,
                                       const std::optional<ControlDeviation>& deviation) {
    if (cfg.population_n < 1 || cfg.n_common < 1 || cfg.n_steps < 1) {
        throw std::invalid_argument("simulation counts must be >= 1");
    }
    const std::size_t n = cfg.n_steps;
    const std::size_t N = cfg.population_n;
    const double dt = p.horizon / static_cast<double>(n);
    const double sqdt = std::sqrt(dt);
    const StepTables st = sample_step_tables(p, tables, traj, n);
    const rng::KeyedGenerator gen(cfg.master_seed);
    const auto zc = common_increments(cfg, p.sigma_0, gen);

    PopulationEnsemble ens;
    ens.horizon = p.horizon;
    ens.n_steps = n;
    ens.population_n = N;
    ens.dt = dt;
    ens.deviation = deviation;
    ens.has_controls = cfg.record_controls;
    ens.has_paths = cfg.store_paths;
    ens.draws.resize(cfg.n_common);
    if (cfg.store_paths) ens.S_paths.resize(cfg.n_common);
    ens.params_digest = param_digest(p);
    ens.config_digest = sim_config_digest(cfg);

    const double ka2 = 2.0 * p.kappa_a, kn2 = 2.0 * p.kappa_n;
    const double invN = 1.0 / static_cast<double>(N);

    parallel_for(cfg.n_common, cfg.workers, [&](std::size_t draw) {
        const auto c = static_cast<std::uint32_t>(draw);
        DrawSummary& ds = ens.draws[draw];
        ds.common_index = c;
        ds.obj.resize(cfg.record_controls ? N : 0);
        ds.mean_q_total.resize(n + 1);
        ds.mean_nu_a.resize(n);
        ds.mean_nu_n.resize(n);
        std::vector<double> qa(N, p.q0_a), qn(N, p.q0_n);
        std::vector<rng::PairedStream> sa(N), sn(N);
        for (std::size_t j = 0; j < N; ++j) {
            const auto pj = static_cast<std::uint32_t>(j);
            sa[j] = {&gen, c, pj, rng::kIdioA, 0.0};
            sn[j] = {&gen, c, pj, rng::kIdioN, 0.0};
        }
        double S = p.s0;
        std::vector<double>* Sp = nullptr;
        if (cfg.store_paths) {
            Sp = &ens.S_paths[draw];
            Sp->reserve(n + 1);
            Sp->push_back(S);
        }
        for (std::size_t k = 0; k < n; ++k) {
            const auto ks = static_cast<std::uint32_t>(k);
            double sum_q = 0.0, sum_na = 0.0, sum_nn = 0.0;
            // player loop: controls at the current (left-point) states
            for (std::size_t j = 0; j < N; ++j) {
                const double q = qa[j] + qn[j];
                const double bracket = st.phi[k] * q + st.mix[k];
                double nu_a = -bracket / ka2;
                double nu_n = -bracket / kn2;
                if (j == 0 && deviation) apply_deviation(*deviation, p, nu_a, nu_n);
                sum_q += q;
                sum_na += nu_a;
                sum_nn += nu_n;
                if (cfg.record_controls) {
                    ObjectiveComponents& obj = ds.obj[j];
                    obj.running_penalty += dt * (-p.phi_run * q * q);
                    obj.cost_a += dt * (-p.kappa_a * nu_a * nu_a);
                    obj.cost_n += dt * (-p.kappa_n * nu_n * nu_n);
                    obj.price_payment += dt * (-(nu_a + nu_n) * S);
                }
                qa[j] += dt * nu_a;
                if (p.sigma_a > 0.0) qa[j] += p.sigma_a * sqdt * sa[j].at_step(ks);
                qn[j] += dt * nu_n;
                if (p.sigma_n > 0.0) qn[j] += p.sigma_n * sqdt * sn[j].at_step(ks);
            }
            const double mean_na = sum_na * invN;
            const double mean_nn = sum_nn * invN;
            ds.mean_q_total[k] = sum_q * invN;
            ds.mean_nu_a[k] = mean_na;
            ds.mean_nu_n[k] = mean_nn;
            ds.sup_mismatch_a =
                std::max(ds.sup_mismatch_a, std::abs(2.0 * mean_na - 2.0 * st.mean_nu_a[k]));
            ds.sup_mismatch_n =
                std::max(ds.sup_mismatch_n, std::abs(2.0 * mean_nn - 2.0 * st.mean_nu_n[k]));
            // realized-average price impact (endogenous)
            S += dt * (p.alpha_a * mean_na + p.alpha_n * mean_nn) + p.sigma_0 * sqdt * zc[c][k];
            if (cfg.store_paths) Sp->push_back(S);
        }
        double sum_q = 0.0;
        ds.terminal_q_total.resize(N);
        for (std::size_t j = 0; j < N; ++j) {
            const double q = qa[j] + qn[j];
            ds.terminal_q_total[j] = q;
            sum_q += q;
            if (cfg.record_controls) {
                ObjectiveComponents& obj = ds.obj[j];
                obj.terminal_wealth = q * S;
                const double miss = q - p.q_target;
                obj.terminal_penalty = -p.psi * miss * miss;
            }
        }
        ds.mean_q_total[n] = sum_q * invN;
        ds.S_T = S;
    });
    return ens;
}

ConditionalMeans estimate_conditional_means(const PopulationEnsemble& ens) {
    if (ens.draws.empty()) throw std::invalid_argument("empty population ensemble");
    ConditionalMeans out;
    out.mean_q_total.reserve(ens.draws.size());
    out.mean_nu_a.reserve(ens.draws.size());
    out.mean_nu_n.reserve(ens.draws.size());
    for (const auto& d : ens.draws) {
        out.mean_q_total.push_back(d.mean_q_total);
        out.mean_nu_a.push_back(d.mean_nu_a);
        out.mean_nu_n.push_back(d.mean_nu_n);
    }
    const std::size_t nodes = ens.n_steps + 1;
    out.dispersion_q.resize(nodes);
    std::vector<double> col(ens.draws.size());
    for (std::size_t k = 0; k < nodes; ++k) {
        for (std::size_t d = 0; d < ens.draws.size(); ++d) col[d] = out.mean_q_total[d][k];
        out.dispersion_q[k] = sample_sd(col);
    }
    return out;
}

void write_paths_csv(const PathEnsemble& ens, const std::filesystem::path& file) {
    if (!ens.has_paths) throw std::invalid_argument("path dump requires store_paths");
    std::string out = "path_id,common_id,t,S,Q_a,Q_n,nu_a,nu_n\n";
    for (std::size_t path = 0; path < ens.records.size(); ++path) {
        for (std::size_t k = 0; k <= ens.n_steps; ++k) {
            const double t = ens.dt * static_cast<double>(k);
            out += format_double(static_cast<double>(path));
            out += ',';
            out += format_double(static_cast<double>(ens.records[path].common_index));
            out += ',';
            out += format_double(t);
            out += ',';
            out += format_double(ens.S[path][k]);
            out += ',';
            out += format_double(ens.Q_a[path][k]);
            out += ',';
            out += format_double(ens.Q_n[path][k]);
            out += ',';
            // controls are left-point: none recorded at the final node
            const double na = k < ens.n_steps ? ens.nu_a[path][k] : 0.0;
            const double nn = k < ens.n_steps ? ens.nu_n[path][k] : 0.0;
            out += format_double(na);
            out += ',';
            out += format_double(nn);
            out += '\n';
        }
    }
    write_text_file(file, out);
}

}  // namespace mfgexec
