#include "mfgexec/config.hpp"

#include <fstream>
#include <set>

namespace mfgexec {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const json& obj, const std::string& prefix, const std::set<std::string>& allowed) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) {
            fail("unknown config key: " + (prefix.empty() ? key : prefix + "." + key));
        }
    }
}

const json& need(const json& obj, const std::string& prefix, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        fail("missing config key: " + (prefix.empty() ? key : prefix + "." + key));
    }
    return *it;
}

double need_number(const json& obj, const std::string& prefix, const std::string& key) {
    const json& v = need(obj, prefix, key);
    if (!v.is_number()) fail("config key must be a number: " + prefix + "." + key);
    return v.get<double>();
}

double opt_number(const json& obj, const std::string& prefix, const std::string& key, double dflt) {
    auto it = obj.find(key);
    if (it == obj.end()) return dflt;
    if (!it->is_number()) fail("config key must be a number: " + prefix + "." + key);
    return it->get<double>();
}

std::uint64_t opt_uint(const json& obj, const std::string& prefix, const std::string& key,
                       std::uint64_t dflt) {
    auto it = obj.find(key);
    if (it == obj.end()) return dflt;
    if (!it->is_number_unsigned() && !it->is_number_integer()) {
        fail("config key must be an unsigned integer: " + prefix + "." + key);
    }
    return it->get<std::uint64_t>();
}

bool opt_bool(const json& obj, const std::string& prefix, const std::string& key, bool dflt) {
    auto it = obj.find(key);
    if (it == obj.end()) return dflt;
    if (!it->is_boolean()) fail("config key must be a boolean: " + prefix + "." + key);
    return it->get<bool>();
}

ParamSet parse_params(const json& obj) {
    static const std::set<std::string> allowed = {
        "alpha_a", "alpha_n", "kappa_a", "kappa_n", "sigma_0", "sigma_a", "sigma_n",
        "phi_run", "psi",     "q_target", "horizon", "q0_a",   "q0_n",    "s0"};
    check_keys(obj, "params", allowed);
    ParamSet p;
    p.alpha_a = need_number(obj, "params", "alpha_a");
    p.alpha_n = need_number(obj, "params", "alpha_n");
    p.kappa_a = need_number(obj, "params", "kappa_a");
    p.kappa_n = need_number(obj, "params", "kappa_n");
    p.sigma_0 = need_number(obj, "params", "sigma_0");
    p.sigma_a = need_number(obj, "params", "sigma_a");
    p.sigma_n = need_number(obj, "params", "sigma_n");
    p.phi_run = need_number(obj, "params", "phi_run");
    p.psi = need_number(obj, "params", "psi");
    p.q_target = need_number(obj, "params", "q_target");
    p.horizon = need_number(obj, "params", "horizon");
    p.q0_a = need_number(obj, "params", "q0_a");
    p.q0_n = need_number(obj, "params", "q0_n");
    p.s0 = need_number(obj, "params", "s0");
    return p;
}

SimConfig parse_sim(const json& obj) {
    static const std::set<std::string> allowed = {"n_steps",       "n_paths",     "n_common",
                                                  "master_seed",   "population_n", "store_paths",
                                                  "record_controls"};
    check_keys(obj, "sim", allowed);
    SimConfig c;
    c.n_steps = static_cast<std::size_t>(opt_uint(obj, "sim", "n_steps", 2000));
    c.n_paths = static_cast<std::size_t>(opt_uint(obj, "sim", "n_paths", 1));
    c.n_common = static_cast<std::size_t>(opt_uint(obj, "sim", "n_common", 1));
    c.master_seed = opt_uint(obj, "sim", "master_seed", 0);
    c.population_n = static_cast<std::size_t>(opt_uint(obj, "sim", "population_n", 1));
    c.store_paths = opt_bool(obj, "sim", "store_paths", false);
    c.record_controls = opt_bool(obj, "sim", "record_controls", true);
    if (c.n_steps < 1 || c.n_paths < 1 || c.n_common < 1 || c.population_n < 1) {
        fail("sim counts must be >= 1");
    }
    return c;
}

std::vector<std::size_t> parse_size_list(const json& arr, const std::string& path) {
    if (!arr.is_array() || arr.empty()) fail("config key must be a nonempty array: " + path);
    std::vector<std::size_t> out;
    for (const auto& v : arr) {
        if (!v.is_number_integer() && !v.is_number_unsigned()) {
            fail("config key must hold integers: " + path);
        }
        out.push_back(v.get<std::size_t>());
    }
    return out;
}

std::vector<double> parse_double_list(const json& arr, const std::string& path) {
    if (!arr.is_array() || arr.empty()) fail("config key must be a nonempty array: " + path);
    std::vector<double> out;
    for (const auto& v : arr) {
        if (!v.is_number()) fail("config key must hold numbers: " + path);
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) fail("config root must be a JSON object");
    static const std::set<std::string> allowed = {"schema_version", "params",  "sim",
                                                  "grid_intervals", "sweep",   "nash_gap",
                                                  "chaos",          "turnpike", "out_dir",
                                                  "emit_svg"};
    check_keys(doc, "", allowed);
    const json& sv = need(doc, "", "schema_version");
    if (!sv.is_number_integer() || sv.get<int>() != kSchemaVersion) {
        fail("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
    }
    RunConfig cfg;
    cfg.params = parse_params(need(doc, "", "params"));
    if (doc.contains("sim")) {
        cfg.sim = parse_sim(doc.at("sim"));
        cfg.has_sim = true;
    }
    cfg.grid_intervals = static_cast<std::size_t>(opt_uint(doc, "", "grid_intervals", 10000));
    if (cfg.grid_intervals < 2 || cfg.grid_intervals % 2 != 0) {
        fail("grid_intervals must be an even integer >= 2");
    }
    if (doc.contains("sweep")) {
        const json& s = doc.at("sweep");
        check_keys(s, "sweep", {"axis", "values"});
        const json& ax = need(s, "sweep", "axis");
        if (!ax.is_string()) fail("config key must be a string: sweep.axis");
        cfg.sweep.axis = ax.get<std::string>();
        if (cfg.sweep.axis != "kappa_ratio" && cfg.sweep.axis != "phi_run" &&
            cfg.sweep.axis != "psi") {
            fail("sweep.axis must be one of kappa_ratio, phi_run, psi");
        }
        cfg.sweep.values = parse_double_list(need(s, "sweep", "values"), "sweep.values");
        cfg.has_sweep = true;
    }
    if (doc.contains("nash_gap")) {
        const json& g = doc.at("nash_gap");
        check_keys(g, "nash_gap", {"Ns", "deviations"});
        cfg.nash_gap.Ns = parse_size_list(need(g, "nash_gap", "Ns"), "nash_gap.Ns");
        const json& devs = need(g, "nash_gap", "deviations");
        if (!devs.is_array() || devs.empty()) {
            fail("config key must be a nonempty array: nash_gap.deviations");
        }
        for (const auto& d : devs) {
            check_keys(d, "nash_gap.deviations[]", {"kind", "epsilon"});
            ControlDeviation dev;
            const std::string kind = need(d, "nash_gap.deviations[]", "kind").get<std::string>();
            if (kind == "gain_scale") {
                dev.kind = ControlDeviation::Kind::gain_scale;
            } else if (kind == "rate_shift") {
                dev.kind = ControlDeviation::Kind::rate_shift;
            } else {
                fail("deviation kind must be gain_scale or rate_shift");
            }
            dev.epsilon = need_number(d, "nash_gap.deviations[]", "epsilon");
            if (!std::isfinite(dev.epsilon)) fail("deviation epsilon must be finite");
            cfg.nash_gap.deviations.push_back(dev);
        }
        cfg.has_nash_gap = true;
    }
    if (doc.contains("chaos")) {
        const json& c = doc.at("chaos");
        check_keys(c, "chaos", {"Ns"});
        cfg.chaos.Ns = parse_size_list(need(c, "chaos", "Ns"), "chaos.Ns");
        cfg.has_chaos = true;
    }
    if (doc.contains("turnpike")) {
        const json& t = doc.at("turnpike");
        check_keys(t, "turnpike", {"tol_abs_frac", "tol_abs_floor", "tol_rel"});
        cfg.turnpike.tol_abs_frac = opt_number(t, "turnpike", "tol_abs_frac", 0.02);
        cfg.turnpike.tol_abs_floor = opt_number(t, "turnpike", "tol_abs_floor", 1.0);
        cfg.turnpike.tol_rel = opt_number(t, "turnpike", "tol_rel", 0.02);
    }
    if (doc.contains("out_dir")) {
        const json& o = doc.at("out_dir");
        if (!o.is_string()) fail("config key must be a string: out_dir");
        cfg.out_dir = o.get<std::string>();
    }
    cfg.emit_svg = opt_bool(doc, "", "emit_svg", false);
    return cfg;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["params"] = {{"alpha_a", cfg.params.alpha_a},   {"alpha_n", cfg.params.alpha_n},
                     {"kappa_a", cfg.params.kappa_a},   {"kappa_n", cfg.params.kappa_n},
                     {"sigma_0", cfg.params.sigma_0},   {"sigma_a", cfg.params.sigma_a},
                     {"sigma_n", cfg.params.sigma_n},   {"phi_run", cfg.params.phi_run},
                     {"psi", cfg.params.psi},           {"q_target", cfg.params.q_target},
                     {"horizon", cfg.params.horizon},   {"q0_a", cfg.params.q0_a},
                     {"q0_n", cfg.params.q0_n},         {"s0", cfg.params.s0}};
    if (cfg.has_sim) {
        doc["sim"] = {{"n_steps", cfg.sim.n_steps},
                      {"n_paths", cfg.sim.n_paths},
                      {"n_common", cfg.sim.n_common},
                      {"master_seed", cfg.sim.master_seed},
                      {"population_n", cfg.sim.population_n},
                      {"store_paths", cfg.sim.store_paths},
                      {"record_controls", cfg.sim.record_controls}};
    }
    doc["grid_intervals"] = cfg.grid_intervals;
    if (cfg.has_sweep) {
        doc["sweep"] = {{"axis", cfg.sweep.axis}, {"values", cfg.sweep.values}};
    }
    if (cfg.has_nash_gap) {
        json devs = json::array();
        for (const auto& d : cfg.nash_gap.deviations) {
            devs.push_back({{"kind", d.kind == ControlDeviation::Kind::gain_scale ? "gain_scale"
                                                                                  : "rate_shift"},
                            {"epsilon", d.epsilon}});
        }
        doc["nash_gap"] = {{"Ns", cfg.nash_gap.Ns}, {"deviations", devs}};
    }
    if (cfg.has_chaos) doc["chaos"] = {{"Ns", cfg.chaos.Ns}};
    doc["turnpike"] = {{"tol_abs_frac", cfg.turnpike.tol_abs_frac},
                       {"tol_abs_floor", cfg.turnpike.tol_abs_floor},
                       {"tol_rel", cfg.turnpike.tol_rel}};
    // out_dir and emit_svg are delivery details, not run semantics; they stay
    // out of the canonical form so digests are stable across output locations
    return doc;
}

std::uint64_t config_digest_of(const nlohmann::json& canonical) {
    const std::string s = canonical.dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

void apply_override(nlohmann::json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        fail("override must look like key.path=value: " + assignment);
    }
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;  // plain string
    }
    json* node = &doc;
    std::size_t start = 0;
    for (;;) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (key.empty()) fail("bad override path: " + path);
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

nlohmann::json load_config_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) fail("cannot open config file: " + path.string());
    json doc;
    try {
        doc = json::parse(is);
    } catch (const json::parse_error& e) {
        fail("config parse error in " + path.string() + ": " + e.what());
    }
    if (doc.is_object() && doc.contains("config") && doc.contains("config_digest")) {
        // run manifest: replay from the embedded config, digest must match
        const json embedded = doc.at("config");
        const std::uint64_t recorded = doc.at("config_digest").get<std::uint64_t>();
        if (config_digest_of(embedded) != recorded) {
            fail("manifest config digest mismatch in " + path.string());
        }
        return embedded;
    }
    return doc;
}

nlohmann::json make_manifest(const std::string& command, const RunConfig& cfg) {
    const json canonical = config_to_json(cfg);
    json m;
    m["schema_version"] = kSchemaVersion;
    m["command"] = command;
    m["config"] = canonical;
    m["config_digest"] = config_digest_of(canonical);
    m["master_seed"] = cfg.sim.master_seed;
    return m;
}

}  // namespace mfgexec
