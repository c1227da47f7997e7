#include "trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "errors.hpp"

namespace croann::train {

void StoppingConfig::validate() const {
    if (window_size < 1) throw ConfigError("window_size must be > 0");
    if (max_window_count < 1) throw ConfigError("max_window_count must be > 0");
}

const char* stop_reason_name(StopReason reason) {
    return reason == StopReason::fe_limit ? "fe_limit" : "overfitness";
}

WindowDecision apply_validation(StoppingState& state,
                                const slfn::SolutionStructure& current_best,
                                double val_fitness) {
    if (val_fitness < state.val_best) {
        state.overfit_count = 0;
        state.val_best = val_fitness;
        state.saved_network = current_best;
        return WindowDecision::go_on;
    }
    state.overfit_count += 1;
    if (state.overfit_count > state.config.max_window_count)
        return WindowDecision::stop_overfitness;
    return WindowDecision::go_on;
}

namespace {

constexpr std::uint64_t kEngineStream = 0xC401;

}  // namespace

TrialReport train_once(const data::DatasetSplit& split, const cro::CroParams& cro_params,
                       const slfn::NetworkConfig& net, const ops::OperatorParams& op_params,
                       const StoppingConfig& stopping, std::uint64_t seed, int trial_index,
                       const ProgressSink& sink, slfn::SolutionStructure* out_network) {
    net.validate();
    op_params.validate();
    stopping.validate();

    const slfn::PatternSet train_set = split.train.view();
    const slfn::PatternSet val_set = split.validation.view();
    const slfn::PatternSet test_set = split.test.view();

    using Engine = cro::Engine<slfn::SolutionStructure>;
    Engine engine(
        cro_params, [&net](Rng& rng) { return ops::initial_gen(net.shape, rng); },
        [&](const slfn::SolutionStructure& s) { return slfn::fitness(s, train_set, net); },
        Rng::derive(seed, kEngineStream));

    StoppingState state;
    state.config = stopping;
    long last_window = engine.fe_count() / stopping.window_size;
    StopReason reason = StopReason::fe_limit;

    // Validation runs once per completed window of training evaluations and
    // never counts against the evaluation budget.
    auto stop_check = [&](const Engine& e) {
        const long window = e.fe_count() / stopping.window_size;
        while (last_window < window) {
            last_window += 1;
            const double val_fitness = slfn::fitness(e.best_structure(), val_set, net);
            if (sink) sink({trial_index, e.fe_count(), e.best_pe(), val_fitness});
            if (apply_validation(state, e.best_structure(), val_fitness) ==
                WindowDecision::stop_overfitness) {
                reason = StopReason::overfitness;
                return true;
            }
        }
        return false;
    };

    const Engine::RunResult result = engine.run(
        [&op_params](const slfn::SolutionStructure& s, Rng& rng) {
            return ops::neighbour(s, op_params, rng);
        },
        [&op_params](const slfn::SolutionStructure& s, Rng& rng) {
            return ops::decomposition(s, op_params, rng);
        },
        [](const slfn::SolutionStructure& a, const slfn::SolutionStructure& b, Rng& rng) {
            return ops::synthesis(a, b, rng);
        },
        stop_check);

    const slfn::SolutionStructure* final_network = &result.best_structure;
    if (reason == StopReason::overfitness && state.saved_network)
        final_network = &*state.saved_network;

    TrialReport report;
    report.train_error = slfn::percent_error_on(*final_network, train_set);
    report.validation_error = slfn::percent_error_on(*final_network, val_set);
    report.test_error = slfn::percent_error_on(*final_network, test_set);
    report.fe_used = result.fe_count;
    report.stop_reason = reason;
    report.seed = seed;
    if (out_network) *out_network = *final_network;
    return report;
}

SplitStats summarize(std::span<const double> values) {
    SplitStats stats;
    if (values.empty()) return stats;
    stats.min = *std::min_element(values.begin(), values.end());
    stats.max = *std::max_element(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    stats.mean = sum / double(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - stats.mean) * (v - stats.mean);
        stats.stddev = std::sqrt(sq / double(values.size() - 1));
    }
    return stats;
}

MultiTrialResult run_trials(int n_trials, const data::RawDataset& dataset,
                            const data::SplitCounts& counts, const cro::CroParams& cro_params,
                            const slfn::NetworkConfig& net, const ops::OperatorParams& op_params,
                            const StoppingConfig& stopping, std::uint64_t base_seed, int jobs,
                            const ProgressSink& sink, bool resample_per_trial) {
    if (n_trials < 1) throw ConfigError("n_trials must be >= 1");
    cro_params.validate();
    if (counts.total() > long(dataset.size()))
        throw DataError("split counts exceed dataset size");

    std::mutex sink_mutex;
    ProgressSink locked_sink;
    if (sink)
        locked_sink = [&](const ProgressRecord& record) {
            const std::lock_guard<std::mutex> lock(sink_mutex);
            sink(record);
        };

    // Default mode: one canonical partition per run, drawn from the base
    // seed; trials differ only in their search seeds. The resample mode
    // draws a fresh partition per trial instead, which folds split-to-split
    // difficulty into the reported spread.
    std::vector<TrialReport> reports(n_trials);
    std::atomic<int> next{0};
    std::exception_ptr worker_error;
    std::mutex error_mutex;
    const data::DatasetSplit shared_split =
        resample_per_trial ? data::DatasetSplit{}
                           : data::split_dataset(dataset, counts, base_seed);
    auto worker = [&] {
        try {
            for (int t = next.fetch_add(1); t < n_trials; t = next.fetch_add(1)) {
                const std::uint64_t seed = base_seed + std::uint64_t(t);
                if (resample_per_trial) {
                    const data::DatasetSplit split = data::split_dataset(dataset, counts, seed);
                    reports[t] = train_once(split, cro_params, net, op_params, stopping, seed, t,
                                            locked_sink);
                } else {
                    reports[t] = train_once(shared_split, cro_params, net, op_params, stopping,
                                            seed, t, locked_sink);
                }
            }
        } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mutex);
            if (!worker_error) worker_error = std::current_exception();
        }
    };

    const int n_workers = std::max(1, std::min(jobs, n_trials));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(n_workers);
        for (int i = 0; i < n_workers; ++i) threads.emplace_back(worker);
        for (std::thread& th : threads) th.join();
    }
    if (worker_error) std::rethrow_exception(worker_error);

    std::vector<double> train_err(n_trials), val_err(n_trials), test_err(n_trials);
    for (int t = 0; t < n_trials; ++t) {
        train_err[t] = reports[t].train_error;
        val_err[t] = reports[t].validation_error;
        test_err[t] = reports[t].test_error;
    }
    MultiTrialResult result;
    result.train = summarize(train_err);
    result.validation = summarize(val_err);
    result.test = summarize(test_err);
    result.trials = std::move(reports);
    return result;
}

}  // namespace croann::train
