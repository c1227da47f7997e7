#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace croann::cmd {

struct RunOptions {
    std::filesystem::path out_dir;
    int jobs = 1;
    /// Serialized trainer progress; when set, a progress line is appended to
    /// this stream sink (used by the CLI for -v logging).
    std::function<void(const std::string&)> log = {};
};

/// Runs the configured trials and writes manifest.txt, trials.csv and
/// summary.csv into out_dir (created if needed). Verifies dataset.sha256
/// when the config carries one. Throws croann errors on failure.
void train(const cfg::RunConfig& config, const RunOptions& options);

/// The eight parameters a sweep may vary.
bool is_sweepable(const std::string& key);

/// For each value: overrides `parameter`, runs the trials, and appends a row
/// to sweep.csv in out_dir. Values are echoed into the CSV exactly as given.
void sweep(const cfg::RunConfig& config, const std::string& parameter,
           const std::vector<std::string>& values, const RunOptions& options);

/// Builds a markdown comparison table from every summary.csv found in
/// run_dir (or its direct subdirectories), writes it to run_dir/report.md,
/// and returns the text. Known benchmark names additionally get the
/// originally published CROANN reference row, tagged as published data.
std::string report(const std::filesystem::path& run_dir);

}  // namespace croann::cmd
