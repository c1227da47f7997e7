#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace croann::slfn {

/// Layer sizes of a single-hidden-layer feedforward network.
struct NetworkShape {
    int inputs = 0;
    int hidden = 0;
    int outputs = 0;

    std::size_t w1_count() const { return std::size_t(inputs) * hidden; }
    std::size_t w2_count() const { return std::size_t(hidden) * outputs; }
    std::size_t b1_count() const { return std::size_t(hidden); }
    std::size_t b2_count() const { return std::size_t(outputs); }
    std::size_t total() const { return w1_count() + w2_count() + b1_count() + b2_count(); }

    bool operator==(const NetworkShape&) const = default;
};

struct NetworkConfig {
    NetworkShape shape;
    double alpha = 1.0;  // weight of the squared-error term
    double beta = 0.7;   // weight of the misclassification term

    void validate() const;  // throws ConfigError
};

/// Weights and biases of one network: input->hidden matrix, hidden->output
/// matrix, hidden biases, output biases. Stored as one flat buffer in that
/// order (matrices row-major), so search operators can treat a network as a
/// plain element sequence while the forward pass indexes it structurally.
class SolutionStructure {
public:
    SolutionStructure() = default;
    explicit SolutionStructure(const NetworkShape& shape)
        : shape_(shape), values_(shape.total(), 0.0) {}

    const NetworkShape& shape() const { return shape_; }
    std::size_t size() const { return values_.size(); }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    std::span<double> flat() { return values_; }
    std::span<const double> flat() const { return values_; }

    std::span<double> w1() { return {values_.data(), shape_.w1_count()}; }
    std::span<const double> w1() const { return {values_.data(), shape_.w1_count()}; }
    std::span<double> w2() { return {values_.data() + shape_.w1_count(), shape_.w2_count()}; }
    std::span<const double> w2() const { return {values_.data() + shape_.w1_count(), shape_.w2_count()}; }
    std::span<double> b1() { return {values_.data() + shape_.w1_count() + shape_.w2_count(), shape_.b1_count()}; }
    std::span<const double> b1() const { return {values_.data() + shape_.w1_count() + shape_.w2_count(), shape_.b1_count()}; }
    std::span<double> b2() { return {values_.data() + shape_.w1_count() + shape_.w2_count() + shape_.b1_count(), shape_.b2_count()}; }
    std::span<const double> b2() const { return {values_.data() + shape_.w1_count() + shape_.w2_count() + shape_.b1_count(), shape_.b2_count()}; }

    std::array<std::span<double>, 4> containers() { return {w1(), w2(), b1(), b2()}; }

    bool operator==(const SolutionStructure&) const = default;

private:
    NetworkShape shape_{};
    std::vector<double> values_;
};

/// Borrowed view of one labeled sample block (features row-major
/// count x n_features, one-hot targets count x n_outputs).
struct PatternSet {
    std::span<const double> features;
    std::span<const double> targets;
    std::span<const int> labels;
    std::size_t count = 0;
    int n_features = 0;
    int n_outputs = 0;
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Runs the network on one pattern. out must have shape.outputs elements and
/// hidden_scratch shape.hidden; both layers use the logistic activation.
void forward(const SolutionStructure& s, std::span<const double> pattern,
             std::span<double> out, std::span<double> hidden_scratch);

/// Allocating convenience overload.
std::vector<double> forward(const SolutionStructure& s, std::span<const double> pattern);

/// 100/(n_outputs*count) times the total squared residual. outputs and
/// targets are count x n_outputs, row-major.
double nmse(std::span<const double> outputs, std::span<const double> targets,
            std::size_t count, int n_outputs);

/// Argmax class index; ties resolve to the lowest index.
int classify(std::span<const double> output);

/// 100 * (1 - correct/total).
double percent_error(std::span<const int> predictions, std::span<const int> labels);

/// Composite objective: alpha * nmse + beta * percent_error over the set.
double fitness(const SolutionStructure& s, const PatternSet& set, const NetworkConfig& cfg);

/// Classification error (percent) of the network on the set.
double percent_error_on(const SolutionStructure& s, const PatternSet& set);

}  // namespace croann::slfn
