#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mfgexec/experiments.hpp"
#include "mfgexec/params.hpp"
#include "mfgexec/simulate.hpp"

namespace mfgexec {

inline constexpr int kSchemaVersion = 1;

/// Raised for malformed configs: unknown keys, missing keys, wrong types.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SweepConfig {
    std::string axis;  ///< kappa_ratio | phi_run | psi
    std::vector<double> values;
};

struct NashGapConfig {
    std::vector<std::size_t> Ns;
    std::vector<ControlDeviation> deviations;
};

struct ChaosConfig {
    std::vector<std::size_t> Ns;
};

struct RunConfig {
    ParamSet params;
    SimConfig sim;
    bool has_sim = false;
    std::size_t grid_intervals = 10000;
    SweepConfig sweep;
    bool has_sweep = false;
    NashGapConfig nash_gap;
    bool has_nash_gap = false;
    ChaosConfig chaos;
    bool has_chaos = false;
    TurnpikeThresholds turnpike;
    std::string out_dir;
    bool emit_svg = false;
};

/// Strict parse: every key must be known, required keys must be present;
/// errors name the offending dotted path (e.g. "params.kappa_a").
RunConfig parse_config(const nlohmann::json& doc);

/// Canonical JSON form (sorted keys) used for digests and manifests.
nlohmann::json config_to_json(const RunConfig& cfg);

/// FNV-1a over the canonical serialization.
std::uint64_t config_digest_of(const nlohmann::json& canonical);

/// Applies a dotted-path override ("sim.n_paths=500"); the value is parsed as
/// a JSON literal when possible, else taken as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Loads a config file; a run manifest (schema_version + command + config) is
/// accepted too, in which case the embedded config is extracted and its digest
/// is asserted against the recorded one.
nlohmann::json load_config_file(const std::filesystem::path& path);

nlohmann::json make_manifest(const std::string& command, const RunConfig& cfg);

}  // namespace mfgexec
