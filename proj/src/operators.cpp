#include "operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "errors.hpp"

namespace croann::ops {

void OperatorParams::validate() const {
    if (!(gaussian_variance > 0.0))
        throw ConfigError("gaussian_variance must be > 0");
    if (decomp_perturb_prob < 0.0 || decomp_perturb_prob > 1.0)
        throw ConfigError("decomp_perturb_prob must lie in [0, 1]");
}

slfn::SolutionStructure initial_gen(const slfn::NetworkShape& shape, Rng& rng) {
    slfn::SolutionStructure s(shape);
    for (std::span<double> container : s.containers()) {
        if (container.empty()) continue;
        for (double& e : container) e = rng.uniform();
        const auto [lo_it, hi_it] = std::minmax_element(container.begin(), container.end());
        const double lo = *lo_it, hi = *hi_it;
        if (lo == hi) {
            std::fill(container.begin(), container.end(), 0.0);
        } else {
            for (double& e : container) e = 2.0 * (e - lo) / (hi - lo) - 1.0;
        }
    }
    return s;
}

slfn::SolutionStructure neighbour(const slfn::SolutionStructure& s,
                                  const OperatorParams& params, Rng& rng) {
    slfn::SolutionStructure out = s;
    const std::size_t i = rng.index(out.size());
    out[i] += rng.gaussian(std::sqrt(params.gaussian_variance));
    return out;
}

namespace {

slfn::SolutionStructure perturbed_copy(const slfn::SolutionStructure& s,
                                       const OperatorParams& params, Rng& rng) {
    slfn::SolutionStructure child = s;
    const double stddev = std::sqrt(params.gaussian_variance);
    bool changed = false;
    for (std::size_t i = 0; i < child.size(); ++i) {
        if (rng.coin(params.decomp_perturb_prob)) {
            child[i] += rng.gaussian(stddev);
            changed = true;
        }
    }
    if (!changed) child = neighbour(child, params, rng);
    return child;
}

}  // namespace

std::pair<slfn::SolutionStructure, slfn::SolutionStructure> decomposition(
    const slfn::SolutionStructure& s, const OperatorParams& params, Rng& rng) {
    auto first = perturbed_copy(s, params, rng);
    auto second = perturbed_copy(s, params, rng);
    return {std::move(first), std::move(second)};
}

slfn::SolutionStructure synthesis(const slfn::SolutionStructure& s1,
                                  const slfn::SolutionStructure& s2, Rng& rng) {
    if (s1.shape() != s2.shape())
        throw std::invalid_argument("synthesis: parent shapes differ");
    slfn::SolutionStructure child = s1;
    for (std::size_t i = 0; i < child.size(); ++i)
        if (rng.coin(0.5)) child[i] = s2[i];
    return child;
}

}  // namespace croann::ops
