#include "slfn.hpp"

#include <stdexcept>

#include "errors.hpp"

namespace croann::slfn {

void NetworkConfig::validate() const {
    if (shape.inputs < 1 || shape.hidden < 1 || shape.outputs < 1)
        throw ConfigError("network layer sizes must all be >= 1");
    if (alpha < 0.0 || alpha > 1.0 || beta < 0.0 || beta > 1.0)
        throw ConfigError("fitness weights alpha and beta must lie in [0, 1]");
}

void forward(const SolutionStructure& s, std::span<const double> pattern,
             std::span<double> out, std::span<double> hidden_scratch) {
    const NetworkShape& sh = s.shape();
    if (pattern.size() != std::size_t(sh.inputs))
        throw std::invalid_argument("forward: pattern length does not match input layer");
    if (out.size() != std::size_t(sh.outputs) || hidden_scratch.size() != std::size_t(sh.hidden))
        throw std::invalid_argument("forward: output/scratch size mismatch");

    const std::span<const double> w1 = s.w1();
    const std::span<const double> w2 = s.w2();
    const std::span<const double> b1 = s.b1();
    const std::span<const double> b2 = s.b2();

    for (int p = 0; p < sh.hidden; ++p) {
        double acc = b1[p];
        for (int m = 0; m < sh.inputs; ++m) acc += w1[std::size_t(m) * sh.hidden + p] * pattern[m];
        hidden_scratch[p] = sigmoid(acc);
    }
    for (int q = 0; q < sh.outputs; ++q) {
        double acc = b2[q];
        for (int p = 0; p < sh.hidden; ++p) acc += w2[std::size_t(p) * sh.outputs + q] * hidden_scratch[p];
        out[q] = sigmoid(acc);
    }
}

std::vector<double> forward(const SolutionStructure& s, std::span<const double> pattern) {
    std::vector<double> out(s.shape().outputs);
    std::vector<double> hidden(s.shape().hidden);
    forward(s, pattern, out, hidden);
    return out;
}

double nmse(std::span<const double> outputs, std::span<const double> targets,
            std::size_t count, int n_outputs) {
    if (count == 0) throw std::invalid_argument("nmse: empty sample set");
    const std::size_t n = count * std::size_t(n_outputs);
    if (outputs.size() != n || targets.size() != n)
        throw std::invalid_argument("nmse: shape mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = targets[i] - outputs[i];
        total += r * r;
    }
    return 100.0 / (double(n_outputs) * double(count)) * total;
}

int classify(std::span<const double> output) {
    int best = 0;
    for (int q = 1; q < int(output.size()); ++q)
        if (output[q] > output[best]) best = q;
    return best;
}

double percent_error(std::span<const int> predictions, std::span<const int> labels) {
    if (predictions.empty() || predictions.size() != labels.size())
        throw std::invalid_argument("percent_error: empty or mismatched inputs");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        if (predictions[i] == labels[i]) ++correct;
    return 100.0 * (1.0 - double(correct) / double(predictions.size()));
}

double fitness(const SolutionStructure& s, const PatternSet& set, const NetworkConfig& cfg) {
    if (set.count == 0) throw std::invalid_argument("fitness: empty sample set");
    std::vector<double> out(set.n_outputs);
    std::vector<double> hidden(s.shape().hidden);
    double sq = 0.0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < set.count; ++i) {
        const std::span<const double> x = set.features.subspan(i * set.n_features, set.n_features);
        const std::span<const double> r = set.targets.subspan(i * set.n_outputs, set.n_outputs);
        forward(s, x, out, hidden);
        for (int q = 0; q < set.n_outputs; ++q) {
            const double d = r[q] - out[q];
            sq += d * d;
        }
        if (classify(out) == set.labels[i]) ++correct;
    }
    const double err = 100.0 / (double(set.n_outputs) * double(set.count)) * sq;
    const double pct = 100.0 * (1.0 - double(correct) / double(set.count));
    return cfg.alpha * err + cfg.beta * pct;
}

double percent_error_on(const SolutionStructure& s, const PatternSet& set) {
    if (set.count == 0) throw std::invalid_argument("percent_error_on: empty sample set");
    std::vector<double> out(set.n_outputs);
    std::vector<double> hidden(s.shape().hidden);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < set.count; ++i) {
        forward(s, set.features.subspan(i * set.n_features, set.n_features), out, hidden);
        if (classify(out) == set.labels[i]) ++correct;
    }
    return 100.0 * (1.0 - double(correct) / double(set.count));
}

}  // namespace croann::slfn
