#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "errors.hpp"

namespace croann::cfg {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& why) {
    throw ConfigError("config key '" + key + "': invalid value '" + value + "' (" + why + ")");
}

long parse_long(const std::string& key, const std::string& value) {
    long out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        bad_value(key, value, "expected an integer");
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        bad_value(key, value, "expected a non-negative integer");
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        bad_value(key, value, "expected a number");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    bad_value(key, value, "expected true or false");
}

// "0-3" or "1,2,5" or a mix: "0-3,7".
std::vector<int> parse_columns(const std::string& key, const std::string& value) {
    std::vector<int> cols;
    std::stringstream ss(value);
    std::string part;
    while (std::getline(ss, part, ',')) {
        part = trim(part);
        if (part.empty()) bad_value(key, value, "empty column entry");
        const auto dash = part.find('-');
        if (dash == std::string::npos) {
            cols.push_back(int(parse_long(key, part)));
        } else {
            const long lo = parse_long(key, part.substr(0, dash));
            const long hi = parse_long(key, part.substr(dash + 1));
            if (hi < lo) bad_value(key, value, "descending column range");
            for (long c = lo; c <= hi; ++c) cols.push_back(int(c));
        }
    }
    if (cols.empty()) bad_value(key, value, "no columns");
    for (int c : cols)
        if (c < 0) bad_value(key, value, "negative column index");
    return cols;
}

struct KeySpec {
    const char* key;
    bool required;
    const char* default_value;  // nullptr when required
};

// Canonical key order; manifests render in this order.
constexpr KeySpec kKeys[] = {
    {"run.name", false, ""},  // empty: use the dataset file stem
    {"dataset.path", true, nullptr},
    {"dataset.attribute_columns", true, nullptr},
    {"dataset.label_column", true, nullptr},
    {"dataset.missing_marker", false, ""},
    {"dataset.n_train", true, nullptr},
    {"dataset.n_val", true, nullptr},
    {"dataset.n_test", true, nullptr},
    {"dataset.sha256", false, ""},
    {"dataset.resample_per_trial", false, "false"},
    {"net.hidden_neurons", false, "5"},
    {"net.alpha", false, "1"},
    {"net.beta", false, "0.7"},
    {"cro.pop_size", false, "20"},
    {"cro.initial_ke", false, "100"},
    {"cro.buffer_init", false, "0"},
    {"cro.mole_coll", false, "0.1"},
    {"cro.ke_loss_rate", false, "0.1"},
    {"cro.decomp_threshold", false, "300"},
    {"cro.synth_threshold", false, "500"},
    {"cro.fe_limit", false, "50000"},
    {"op.gaussian_variance", false, "0.1"},
    {"op.decomp_perturb_prob", false, "0.5"},
    {"stop.window_size", false, "100"},
    {"stop.max_window_count", false, "300"},
    {"trials.count", false, "50"},
    {"trials.base_seed", false, "1"},
};

RunConfig bind_config(std::map<std::string, std::string> values, const std::string& source_name) {
    // Complete the map with defaults; reject unknown keys.
    for (const auto& [key, value] : values) {
        const bool known = std::any_of(std::begin(kKeys), std::end(kKeys),
                                       [&](const KeySpec& spec) { return key == spec.key; });
        if (!known) throw ConfigError(source_name + ": unknown config key '" + key + "'");
    }
    for (const KeySpec& spec : kKeys) {
        if (values.count(spec.key)) continue;
        if (spec.required)
            throw ConfigError(source_name + ": missing required config key '" + spec.key + "'");
        values[spec.key] = spec.default_value;
    }

    RunConfig config;
    config.name = values["run.name"];
    config.dataset.path = values["dataset.path"];
    config.dataset.schema.attribute_columns =
        parse_columns("dataset.attribute_columns", values["dataset.attribute_columns"]);
    config.dataset.schema.label_column =
        int(parse_long("dataset.label_column", values["dataset.label_column"]));
    config.dataset.schema.missing_marker = values["dataset.missing_marker"];
    config.dataset.counts.train = int(parse_long("dataset.n_train", values["dataset.n_train"]));
    config.dataset.counts.validation = int(parse_long("dataset.n_val", values["dataset.n_val"]));
    config.dataset.counts.test = int(parse_long("dataset.n_test", values["dataset.n_test"]));
    if (!values["dataset.sha256"].empty()) config.dataset.sha256 = values["dataset.sha256"];
    config.dataset.resample_per_trial =
        parse_bool("dataset.resample_per_trial", values["dataset.resample_per_trial"]);

    config.net.shape.hidden = int(parse_long("net.hidden_neurons", values["net.hidden_neurons"]));
    config.net.alpha = parse_double("net.alpha", values["net.alpha"]);
    config.net.beta = parse_double("net.beta", values["net.beta"]);

    config.cro.pop_size = int(parse_long("cro.pop_size", values["cro.pop_size"]));
    config.cro.initial_ke = parse_double("cro.initial_ke", values["cro.initial_ke"]);
    config.cro.buffer_init = parse_double("cro.buffer_init", values["cro.buffer_init"]);
    config.cro.mole_coll = parse_double("cro.mole_coll", values["cro.mole_coll"]);
    config.cro.ke_loss_rate = parse_double("cro.ke_loss_rate", values["cro.ke_loss_rate"]);
    config.cro.decomp_threshold =
        parse_long("cro.decomp_threshold", values["cro.decomp_threshold"]);
    config.cro.synth_threshold =
        parse_double("cro.synth_threshold", values["cro.synth_threshold"]);
    config.cro.fe_limit = parse_long("cro.fe_limit", values["cro.fe_limit"]);

    config.op.gaussian_variance =
        parse_double("op.gaussian_variance", values["op.gaussian_variance"]);
    config.op.decomp_perturb_prob =
        parse_double("op.decomp_perturb_prob", values["op.decomp_perturb_prob"]);

    config.stop.window_size = parse_long("stop.window_size", values["stop.window_size"]);
    config.stop.max_window_count =
        parse_long("stop.max_window_count", values["stop.max_window_count"]);

    config.n_trials = int(parse_long("trials.count", values["trials.count"]));
    config.base_seed = parse_u64("trials.base_seed", values["trials.base_seed"]);

    if (config.name.empty()) {
        config.name = config.dataset.path.stem().string();
        values["run.name"] = config.name;
    }
    if (config.n_trials < 1) throw ConfigError("trials.count must be >= 1");

    config.cro.validate();
    config.op.validate();
    config.stop.validate();
    if (config.net.shape.hidden < 1) throw ConfigError("net.hidden_neurons must be >= 1");
    if (config.net.alpha < 0.0 || config.net.alpha > 1.0 || config.net.beta < 0.0 ||
        config.net.beta > 1.0)
        throw ConfigError("net.alpha and net.beta must lie in [0, 1]");
    if (config.dataset.counts.train < 1 || config.dataset.counts.validation < 1 ||
        config.dataset.counts.test < 1)
        throw ConfigError("dataset split counts must all be >= 1");

    config.pairs.clear();
    for (const KeySpec& spec : kKeys) config.pairs.emplace_back(spec.key, values[spec.key]);
    return config;
}

}  // namespace

std::string env_var_for_key(const std::string& key) {
    std::string out = "CROANN_";
    for (char c : key)
        out += c == '.' ? '_' : char(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

RunConfig parse_config_text(const std::string& text, const std::string& source_name,
                            const EnvLookup& env) {
    std::map<std::string, std::string> values;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string entry = trim(line);
        if (entry.empty()) continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source_name + ":" + std::to_string(line_no) +
                              ": expected key=value");
        const std::string key = trim(entry.substr(0, eq));
        const std::string value = trim(entry.substr(eq + 1));
        if (key.empty())
            throw ConfigError(source_name + ":" + std::to_string(line_no) + ": empty key");
        values[key] = value;
    }

    const EnvLookup lookup =
        env ? env : EnvLookup([](const std::string& name) { return std::getenv(name.c_str()); });
    for (const KeySpec& spec : kKeys) {
        if (const char* v = lookup(env_var_for_key(spec.key))) values[spec.key] = v;
    }
    return bind_config(std::move(values), source_name);
}

RunConfig load_config_file(const std::filesystem::path& path, const EnvLookup& env) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str(), path.string(), env);
}

RunConfig with_override(const RunConfig& config, const std::string& key,
                        const std::string& value) {
    std::map<std::string, std::string> values(config.pairs.begin(), config.pairs.end());
    if (!values.count(key)) throw ConfigError("unknown config key '" + key + "'");
    values[key] = value;
    return bind_config(std::move(values), "override");
}

std::string render_manifest(const RunConfig& config,
                            const std::vector<std::string>& header_comments) {
    std::string out;
    for (const std::string& comment : header_comments) out += "# " + comment + "\n";
    for (const auto& [key, value] : config.pairs) out += key + " = " + value + "\n";
    return out;
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

}  // namespace croann::cfg

