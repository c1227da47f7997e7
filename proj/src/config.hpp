#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cro.hpp"
#include "data_io.hpp"
#include "operators.hpp"
#include "slfn.hpp"
#include "trainer.hpp"

namespace croann::cfg {

/// Dataset location and layout, as declared in a run configuration.
struct DatasetConfig {
    std::filesystem::path path;
    data::CsvSchema schema;
    data::SplitCounts counts;
    std::optional<std::string> sha256;  // verified against the file when set
    /// false: one canonical partition per run (seeded by trials.base_seed);
    /// true: a fresh partition per trial (seeded by the trial seed).
    bool resample_per_trial = false;
};

/// Fully resolved run configuration. `pairs` preserves every key with its
/// final textual value (defaults included), in canonical key order; it is
/// what gets written to a manifest and re-parsed when a run is reproduced.
struct RunConfig {
    std::string name = "run";
    DatasetConfig dataset;
    cro::CroParams cro;
    slfn::NetworkConfig net;  // shape.inputs/outputs filled from the dataset at load time
    ops::OperatorParams op;
    train::StoppingConfig stop;
    int n_trials = 50;
    std::uint64_t base_seed = 1;

    std::vector<std::pair<std::string, std::string>> pairs;
};

/// The environment variable that overrides a config key:
/// "cro.pop_size" -> "CROANN_CRO_POP_SIZE".
std::string env_var_for_key(const std::string& key);

using EnvLookup = std::function<const char*(const std::string&)>;

/// Parses key=value text ('#' comments, blank lines ignored). Unknown keys
/// and out-of-range values throw ConfigError naming the key. Environment
/// variables with the CROANN_ prefix override file values; `env` exists so
/// tests can inject a fake environment (default: getenv).
RunConfig parse_config_text(const std::string& text, const std::string& source_name,
                            const EnvLookup& env = {});
RunConfig load_config_file(const std::filesystem::path& path, const EnvLookup& env = {});

/// Re-binds the configuration with one key replaced (used by sweeps and by
/// CLI-level overrides). Value range checks run again.
RunConfig with_override(const RunConfig& config, const std::string& key,
                        const std::string& value);

/// Canonical key=value rendering of the resolved configuration, one key per
/// line, suitable for reloading with parse_config_text. header_comments are
/// emitted first as '#' lines.
std::string render_manifest(const RunConfig& config,
                            const std::vector<std::string>& header_comments);

/// Shortest round-trip decimal rendering of a double (dot decimal separator,
/// locale independent). Shared by manifests and CSV writers.
std::string format_double(double value);

}  // namespace croann::cfg
