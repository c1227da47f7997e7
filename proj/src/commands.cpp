#include "commands.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include "errors.hpp"
#include "sha256.hpp"
#include "trainer.hpp"
#include "version.hpp"

namespace croann::cmd {

namespace {

std::string utc_now_iso() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string now_ns() {
    return std::to_string(
        std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

struct LoadedDataset {
    data::RawDataset raw;
    data::SplitCounts counts;  // after the shortfall policy
    std::string sha256;
};

LoadedDataset load_dataset(const cfg::RunConfig& config) {
    LoadedDataset loaded;
    loaded.sha256 = sha256_file(config.dataset.path);
    if (config.dataset.sha256 && *config.dataset.sha256 != loaded.sha256)
        throw DataError("dataset checksum mismatch for " + config.dataset.path.string() +
                        ": expected " + *config.dataset.sha256 + ", got " + loaded.sha256);
    loaded.raw = data::parse_csv(config.dataset.path, config.dataset.schema);
    loaded.counts = data::resolve_split_counts(config.dataset.counts, loaded.raw.size());
    return loaded;
}

slfn::NetworkConfig network_for(const cfg::RunConfig& config, const data::RawDataset& raw) {
    slfn::NetworkConfig net = config.net;
    net.shape.inputs = raw.n_attributes;
    net.shape.outputs = raw.n_classes();
    net.validate();
    return net;
}

train::MultiTrialResult run_configured_trials(const cfg::RunConfig& config,
                                              const LoadedDataset& loaded,
                                              const RunOptions& options) {
    const slfn::NetworkConfig net = network_for(config, loaded.raw);
    train::ProgressSink sink;
    long emitted = 0;
    if (options.log)
        sink = [&](const train::ProgressRecord& r) {
            if (emitted++ % 100 == 0)
                options.log("trial " + std::to_string(r.trial) + " fe=" + std::to_string(r.fe_count) +
                            " train=" + cfg::format_double(r.train_best_fitness) +
                            " val=" + cfg::format_double(r.val_fitness));
        };
    return train::run_trials(config.n_trials, loaded.raw, loaded.counts, config.cro, net,
                             config.op, config.stop, config.base_seed,
                             std::max(1, options.jobs), sink,
                             config.dataset.resample_per_trial);
}

std::string trials_csv(const train::MultiTrialResult& result) {
    std::string out = "trial,seed,stop_reason,fe_used,train_error,val_error,test_error\n";
    for (std::size_t t = 0; t < result.trials.size(); ++t) {
        const train::TrialReport& r = result.trials[t];
        out += std::to_string(t) + ',' + std::to_string(r.seed) + ',' +
               train::stop_reason_name(r.stop_reason) + ',' + std::to_string(r.fe_used) + ',' +
               cfg::format_double(r.train_error) + ',' + cfg::format_double(r.validation_error) +
               ',' + cfg::format_double(r.test_error) + '\n';
    }
    return out;
}

std::string summary_csv(const train::MultiTrialResult& result) {
    auto row = [](const char* split, const train::SplitStats& s) {
        return std::string(split) + ',' + cfg::format_double(s.mean) + ',' +
               cfg::format_double(s.stddev) + ',' + cfg::format_double(s.min) + ',' +
               cfg::format_double(s.max) + '\n';
    };
    return "split,mean,std,min,max\n" + row("train", result.train) +
           row("validation", result.validation) + row("test", result.test);
}

}  // namespace

void train(const cfg::RunConfig& config, const RunOptions& options) {
    const LoadedDataset loaded = load_dataset(config);
    const train::MultiTrialResult result = run_configured_trials(config, loaded, options);

    std::filesystem::create_directories(options.out_dir);
    const cfg::RunConfig resolved =
        cfg::with_override(config, "dataset.sha256", loaded.sha256);
    write_text_file(options.out_dir / "manifest.txt",
                    cfg::render_manifest(resolved, {
                                             "croann " + std::string(kVersion) + " run manifest",
                                             "created: " + utc_now_iso(),
                                             "created_ns: " + now_ns(),
                                         }));
    write_text_file(options.out_dir / "trials.csv", trials_csv(result));
    write_text_file(options.out_dir / "summary.csv", summary_csv(result));

    if (options.log) {
        auto line = [&](const char* split, const train::SplitStats& s) {
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%s error %%: mean=%.2f std=%.2f min=%.2f max=%.2f",
                          split, s.mean, s.stddev, s.min, s.max);
            options.log(buf);
        };
        line("train", result.train);
        line("validation", result.validation);
        line("test", result.test);
    }
}

bool is_sweepable(const std::string& key) {
    static constexpr std::array<const char*, 8> kSweepable = {
        "op.gaussian_variance", "cro.pop_size",         "cro.buffer_init",
        "cro.initial_ke",       "cro.mole_coll",        "cro.ke_loss_rate",
        "cro.decomp_threshold", "cro.synth_threshold",
    };
    return std::any_of(kSweepable.begin(), kSweepable.end(),
                       [&](const char* k) { return key == k; });
}

void sweep(const cfg::RunConfig& config, const std::string& parameter,
           const std::vector<std::string>& values, const RunOptions& options) {
    if (!is_sweepable(parameter))
        throw ConfigError("parameter '" + parameter + "' is not sweepable");
    if (values.empty()) throw ConfigError("sweep: no values given");

    std::string csv = "value,test_mean_error,test_std\n";
    for (const std::string& value : values) {
        const cfg::RunConfig point = cfg::with_override(config, parameter, value);
        const LoadedDataset loaded = load_dataset(point);
        if (options.log) options.log("sweep " + parameter + " = " + value);
        const train::MultiTrialResult result = run_configured_trials(point, loaded, options);
        csv += value + ',' + cfg::format_double(result.test.mean) + ',' +
               cfg::format_double(result.test.stddev) + '\n';
    }

    std::filesystem::create_directories(options.out_dir);
    write_text_file(options.out_dir / "manifest.txt",
                    cfg::render_manifest(config, {
                                             "croann " + std::string(kVersion) + " sweep manifest",
                                             "created: " + utc_now_iso(),
                                             "created_ns: " + now_ns(),
                                             "sweep parameter: " + parameter,
                                         }));
    write_text_file(options.out_dir / "sweep.csv", csv);
}

namespace {

struct PublishedRow {
    const char* key;  // substring matched against the run name, lowercased
    // train, validation, test: mean, std, min, max each
    double values[12];
};

// Test-set benchmark rows originally published for CROANN on these datasets;
// rendered alongside local results for comparison and tagged as published.
constexpr PublishedRow kPublished[] = {
    {"iris", {2.00, 3.68, 0.00, 5.33, 4.32, 2.16, 2.70, 8.10, 1.31, 1.77, 0.00, 7.89}},
    {"cancer", {3.89, 0.72, 3.21, 5.61, 3.54, 0.42, 2.86, 4.00, 1.06, 0.67, 0.00, 2.29}},
    {"diabetes", {16.55, 2.73, 15.89, 18.23, 16.04, 3.01, 14.58, 17.71, 19.67, 5.38, 17.19, 23.44}},
};

struct RunRow {
    std::string name;
    std::string created;
    std::string created_ns;
    std::map<std::string, std::array<double, 4>> stats;  // split -> mean,std,min,max
};

std::optional<RunRow> read_run_dir(const std::filesystem::path& dir) {
    const std::filesystem::path summary = dir / "summary.csv";
    if (!std::filesystem::exists(summary)) return std::nullopt;
    RunRow row;
    row.name = dir.filename().string();

    const std::filesystem::path manifest = dir / "manifest.txt";
    if (std::filesystem::exists(manifest)) {
        std::ifstream in(manifest);
        std::string line;
        while (std::getline(in, line)) {
            if (line.rfind("# created: ", 0) == 0) row.created = line.substr(11);
            if (line.rfind("# created_ns: ", 0) == 0) row.created_ns = line.substr(14);
            if (line.rfind("run.name", 0) == 0) {
                const auto eq = line.find('=');
                if (eq != std::string::npos) {
                    std::string name = line.substr(eq + 1);
                    name.erase(0, name.find_first_not_of(' '));
                    if (!name.empty()) row.name = name;
                }
            }
        }
    }

    std::ifstream in(summary);
    if (!in) throw IoError("cannot read " + summary.string());
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string split, field;
        std::getline(ss, split, ',');
        std::array<double, 4> s{};
        for (double& v : s) {
            if (!std::getline(ss, field, ',')) break;
            v = std::strtod(field.c_str(), nullptr);
        }
        if (!split.empty()) row.stats[split] = s;
    }
    if (row.stats.empty()) return std::nullopt;
    return row;
}

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

std::string report(const std::filesystem::path& run_dir) {
    if (!std::filesystem::is_directory(run_dir))
        throw IoError("not a directory: " + run_dir.string());

    std::vector<RunRow> rows;
    if (auto top = read_run_dir(run_dir)) rows.push_back(std::move(*top));
    std::vector<std::filesystem::path> children;
    for (const auto& entry : std::filesystem::directory_iterator(run_dir))
        if (entry.is_directory()) children.push_back(entry.path());
    std::sort(children.begin(), children.end());
    for (const auto& child : children)
        if (auto row = read_run_dir(child)) rows.push_back(std::move(*row));
    if (rows.empty()) throw DataError("no summary.csv found under " + run_dir.string());

    std::stable_sort(rows.begin(), rows.end(), [](const RunRow& a, const RunRow& b) {
        return a.created_ns < b.created_ns;
    });

    std::string md = "# Benchmark report\n";
    md += "\nError rate (%) per split. Rows tagged `published` are the originally"
          " published CROANN benchmark results, included for comparison.\n\n";
    md += "| run | source | split | mean | std | min | max |\n";
    md += "|---|---|---|---|---|---|---|\n";

    auto lowered = [](std::string s) {
        std::transform(s.begin(), s.end(), s.begin(),
                       [](unsigned char c) { return char(std::tolower(c)); });
        return s;
    };

    std::vector<const PublishedRow*> cited;
    for (const RunRow& row : rows) {
        for (const char* split : {"train", "validation", "test"}) {
            const auto it = row.stats.find(split);
            if (it == row.stats.end()) continue;
            const auto& s = it->second;
            md += "| " + row.name + (row.created.empty() ? "" : " (" + row.created + ")") +
                  " | this run | " + split + " | " + fmt2(s[0]) + " | " + fmt2(s[1]) + " | " +
                  fmt2(s[2]) + " | " + fmt2(s[3]) + " |\n";
        }
        const std::string name = lowered(row.name);
        for (const PublishedRow& pub : kPublished) {
            if (name.find(pub.key) == std::string::npos) continue;
            if (std::find(cited.begin(), cited.end(), &pub) != cited.end()) continue;
            cited.push_back(&pub);
            const char* splits[3] = {"train", "validation", "test"};
            for (int i = 0; i < 3; ++i) {
                md += "| " + std::string(pub.key) + " | published | " + splits[i];
                for (int j = 0; j < 4; ++j) md += " | " + fmt2(pub.values[4 * i + j]);
                md += " |\n";
            }
        }
    }

    write_text_file(run_dir / "report.md", md);
    return md;
}

}  // namespace croann::cmd
