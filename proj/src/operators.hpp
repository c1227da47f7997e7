#pragma once

#include <utility>

#include "rng.hpp"
#include "slfn.hpp"

namespace croann::ops {

struct OperatorParams {
    double gaussian_variance = 0.1;   // variance of the perturbation noise
    double decomp_perturb_prob = 0.5; // per-element perturbation probability

    void validate() const;  // throws ConfigError
};

/// Fresh random network: every container is filled with uniform randoms and
/// then min-max rescaled so its smallest element maps to -1 and its largest
/// to +1. A container whose elements are all equal (e.g. size 1) becomes
/// all zeros.
slfn::SolutionStructure initial_gen(const slfn::NetworkShape& shape, Rng& rng);

/// Copy of s with exactly one element, chosen uniformly over the flattened
/// structure, offset by zero-mean Gaussian noise.
slfn::SolutionStructure neighbour(const slfn::SolutionStructure& s,
                                  const OperatorParams& params, Rng& rng);

/// Two independent copies of s, each element perturbed with probability
/// decomp_perturb_prob. A copy that comes out untouched gets one neighbour
/// perturbation instead, so each child always differs from s.
std::pair<slfn::SolutionStructure, slfn::SolutionStructure> decomposition(
    const slfn::SolutionStructure& s, const OperatorParams& params, Rng& rng);

/// Element-wise mix of two structures: each element is taken from either
/// parent with equal probability. Shapes must match.
slfn::SolutionStructure synthesis(const slfn::SolutionStructure& s1,
                                  const slfn::SolutionStructure& s2, Rng& rng);

}  // namespace croann::ops
