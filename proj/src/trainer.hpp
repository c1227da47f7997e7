#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "cro.hpp"
#include "data_io.hpp"
#include "operators.hpp"
#include "slfn.hpp"

namespace croann::train {

struct StoppingConfig {
    long window_size = 100;       // training evaluations per validation window
    long max_window_count = 300;  // consecutive non-improving windows tolerated

    void validate() const;  // throws ConfigError
};

enum class StopReason { fe_limit, overfitness };

const char* stop_reason_name(StopReason reason);

struct TrialReport {
    double train_error = 0.0;       // percent, final network
    double validation_error = 0.0;  // percent, final network
    double test_error = 0.0;        // percent, final network
    long fe_used = 0;
    StopReason stop_reason = StopReason::fe_limit;
    std::uint64_t seed = 0;

    bool operator==(const TrialReport&) const = default;
};

struct ProgressRecord {
    int trial = 0;
    long fe_count = 0;
    double train_best_fitness = 0.0;
    double val_fitness = 0.0;
};
using ProgressSink = std::function<void(const ProgressRecord&)>;

/// Validation monitor state (one per run). val_best is the best validation
/// fitness seen at any window boundary; saved_network is the network that
/// achieved it and becomes the run result if overfitness stops the run.
struct StoppingState {
    StoppingConfig config;
    long overfit_count = 0;
    double val_best = std::numeric_limits<double>::infinity();
    std::optional<slfn::SolutionStructure> saved_network;
};

enum class WindowDecision { go_on, stop_overfitness };

/// One window-boundary check: a strict improvement resets the overfitness
/// counter and snapshots the network; otherwise the counter grows and the
/// run stops once it exceeds max_window_count.
WindowDecision apply_validation(StoppingState& state,
                                const slfn::SolutionStructure& current_best,
                                double val_fitness);

/// One seeded training run on an already-prepared split. If out_network is
/// non-null it receives the final network (the validation-best snapshot when
/// overfitness stopped the run, the engine's global best otherwise).
TrialReport train_once(const data::DatasetSplit& split, const cro::CroParams& cro_params,
                       const slfn::NetworkConfig& net, const ops::OperatorParams& op_params,
                       const StoppingConfig& stopping, std::uint64_t seed, int trial_index = 0,
                       const ProgressSink& sink = {},
                       slfn::SolutionStructure* out_network = nullptr);

struct SplitStats {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation; 0 for a single trial
    double min = 0.0;
    double max = 0.0;
};

SplitStats summarize(std::span<const double> values);

struct MultiTrialResult {
    SplitStats train;
    SplitStats validation;
    SplitStats test;
    std::vector<TrialReport> trials;
};

/// Runs n_trials independent trials with seeds base_seed .. base_seed+n-1.
/// By default every trial trains on the same canonical partition, drawn once
/// from base_seed; with resample_per_trial each trial re-splits the dataset
/// with its own seed. Trials execute on up to `jobs` threads; results are
/// ordered by trial index and do not depend on the thread count. The sink
/// may be called from worker threads but calls are serialized.
MultiTrialResult run_trials(int n_trials, const data::RawDataset& dataset,
                            const data::SplitCounts& counts, const cro::CroParams& cro_params,
                            const slfn::NetworkConfig& net, const ops::OperatorParams& op_params,
                            const StoppingConfig& stopping, std::uint64_t base_seed, int jobs = 1,
                            const ProgressSink& sink = {}, bool resample_per_trial = false);

}  // namespace croann::train
