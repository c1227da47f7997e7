// croann command line: train / sweep / report, built entirely on the public
// C API in croann.h.

#include <cstdio>
#include <ctime>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "croann.h"

namespace {

struct ConfigDeleter {
    void operator()(croann_config* c) const { croann_config_free(c); }
};
using ConfigHandle = std::unique_ptr<croann_config, ConfigDeleter>;

// Exit codes: 1 usage/config, 2 data or file problems, 3 internal.
int exit_code_for(croann_status status) {
    switch (status) {
        case CROANN_OK: return 0;
        case CROANN_ERR_INVALID_ARGUMENT:
        case CROANN_ERR_CONFIG: return 1;
        case CROANN_ERR_IO:
        case CROANN_ERR_DATA: return 2;
        case CROANN_ERR_INTERNAL: return 3;
    }
    return 3;
}

int report_failure(croann_status status) {
    std::fprintf(stderr, "croann: error (%s): %s\n", croann_status_name(status),
                 croann_last_error());
    return exit_code_for(status);
}

std::string config_value(const croann_config* config, const char* key) {
    char buf[512] = {0};
    if (croann_config_get(config, key, buf, sizeof(buf)) != CROANN_OK) return "";
    return buf;
}

std::string default_out_dir(const croann_config* config) {
    std::string name = config_value(config, "run.name");
    if (name.empty()) name = "run";
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y%m%d-%H%M%S", &tm);
    return "runs/" + name + "-" + stamp;
}

std::vector<std::string> split_values(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string part;
    while (std::getline(ss, part, ',')) {
        while (!part.empty() && part.front() == ' ') part.erase(part.begin());
        while (!part.empty() && part.back() == ' ') part.pop_back();
        if (!part.empty()) out.push_back(part);
    }
    return out;
}

ConfigHandle load_config(const std::string& path, const std::string& seed_override,
                         croann_status& status) {
    croann_config* raw = nullptr;
    status = croann_config_load(path.c_str(), &raw);
    ConfigHandle config(raw);
    if (status != CROANN_OK) return nullptr;
    if (!seed_override.empty()) {
        status = croann_config_set(config.get(), "trials.base_seed", seed_override.c_str());
        if (status != CROANN_OK) return nullptr;
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CROANN benchmark harness (chemical reaction optimization "
                 "training of feedforward classifiers)"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(croann_version()));

    std::string config_path, out_dir, seed, param, values_csv;
    int jobs = 0;

    CLI::App* train = app.add_subcommand("train", "run the configured trials and write reports");
    train->add_option("--config", config_path, "config file (key=value)")->required();
    train->add_option("--out", out_dir, "output directory (default runs/<name>-<timestamp>)");
    train->add_option("--jobs", jobs, "worker threads (default: hardware concurrency)");
    train->add_option("--seed", seed, "override trials.base_seed");

    CLI::App* sweep = app.add_subcommand("sweep", "re-run the trials over a parameter grid");
    sweep->add_option("--config", config_path, "config file (key=value)")->required();
    sweep->add_option("--param", param, "config key to sweep (e.g. op.gaussian_variance)")
        ->required();
    sweep->add_option("--values", values_csv, "comma-separated list of values")->required();
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--jobs", jobs, "worker threads (default: hardware concurrency)");
    sweep->add_option("--seed", seed, "override trials.base_seed");

    std::string report_dir;
    CLI::App* report = app.add_subcommand("report", "render a comparison table over run outputs");
    report->add_option("dir", report_dir, "directory containing run outputs")->required();

    CLI11_PARSE(app, argc, argv);

    if (train->parsed() || sweep->parsed()) {
        croann_status status = CROANN_OK;
        const ConfigHandle config = load_config(config_path, seed, status);
        if (!config) return report_failure(status);
        if (out_dir.empty()) out_dir = default_out_dir(config.get());

        if (train->parsed()) {
            status = croann_train(config.get(), out_dir.c_str(), jobs);
            if (status != CROANN_OK) return report_failure(status);
            std::printf("run written to %s\n", out_dir.c_str());
            return 0;
        }

        const std::vector<std::string> values = split_values(values_csv);
        std::vector<const char*> value_ptrs;
        value_ptrs.reserve(values.size());
        for (const std::string& v : values) value_ptrs.push_back(v.c_str());
        status = croann_sweep(config.get(), param.c_str(), value_ptrs.data(), value_ptrs.size(),
                              out_dir.c_str(), jobs);
        if (status != CROANN_OK) return report_failure(status);
        std::printf("sweep written to %s\n", out_dir.c_str());
        return 0;
    }

    char* markdown = nullptr;
    const croann_status status = croann_report(report_dir.c_str(), &markdown);
    if (status != CROANN_OK) return report_failure(status);
    std::fputs(markdown, stdout);
    croann_string_free(markdown);
    return 0;
}
