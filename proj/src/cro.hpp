#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace croann::cro {

struct CroParams {
    int pop_size = 20;
    double initial_ke = 100.0;
    double buffer_init = 0.0;
    double mole_coll = 0.1;      // probability that a reaction is inter-molecular
    double ke_loss_rate = 0.1;   // lower bound of the on-wall KE retention draw
    long decomp_threshold = 300; // inactivity hits before a molecule decomposes
    double synth_threshold = 500.0; // KE at or below which molecules may merge
    long fe_limit = 50'000;

    void validate() const {
        if (pop_size < 1) throw ConfigError("pop_size must be >= 1");
        if (initial_ke < 0.0) throw ConfigError("initial_ke must be >= 0");
        if (buffer_init < 0.0) throw ConfigError("buffer_init must be >= 0");
        if (mole_coll < 0.0 || mole_coll > 1.0) throw ConfigError("mole_coll must lie in [0, 1]");
        if (ke_loss_rate < 0.0 || ke_loss_rate > 1.0) throw ConfigError("ke_loss_rate must lie in [0, 1]");
        if (decomp_threshold < 1) throw ConfigError("decomp_threshold must be > 0");
        if (!(synth_threshold > 0.0)) throw ConfigError("synth_threshold must be > 0");
        if (fe_limit < 1) throw ConfigError("fe_limit must be > 0");
    }
};

// --- energy bookkeeping -----------------------------------------------------
//
// Pure functions computing the energy outcome of each reaction. The engine
// applies them with freshly drawn random factors; the arithmetic is kept in
// complement form (gain = surplus - kept) so the population + buffer total
// stays constant to rounding error over long runs.

struct OnWallOutcome {
    bool accepted = false;
    double new_ke = 0.0;
    double buffer_gain = 0.0;
};

/// retention is the drawn fraction of the energy surplus the molecule keeps;
/// the rest flows to the buffer. Acceptance is pe + ke >= pe_new.
inline OnWallOutcome on_wall_energy(double pe, double ke, double pe_new, double retention) {
    if (pe + ke < pe_new) return {};
    const double surplus = pe + ke - pe_new;
    const double new_ke = surplus * retention;
    return {true, new_ke, surplus - new_ke};
}

struct DecompositionOutcome {
    bool accepted = false;
    double ke1 = 0.0;
    double ke2 = 0.0;
    double buffer_draw = 0.0;
};

/// A deficit (children cost more than the parent holds) may be covered by
/// drawing buffer * delta1 * delta2 from the central buffer; if even that
/// does not reach zero the reaction fails and the buffer is left untouched.
inline DecompositionOutcome decomposition_energy(double pe, double ke, double pe1_new,
                                                 double pe2_new, double buffer,
                                                 double delta1, double delta2, double split) {
    double surplus = pe + ke - pe1_new - pe2_new;
    double draw = 0.0;
    if (surplus < 0.0) {
        draw = buffer * delta1 * delta2;
        if (surplus + draw < 0.0) return {};
        surplus += draw;
    }
    const double ke1 = surplus * split;
    return {true, ke1, surplus - ke1, draw};
}

struct PairOutcome {
    bool accepted = false;
    double ke1 = 0.0;
    double ke2 = 0.0;
};

inline PairOutcome intermolecular_energy(double pe1, double ke1, double pe2, double ke2,
                                         double pe1_new, double pe2_new, double split) {
    const double surplus = (pe1 + ke1 + pe2 + ke2) - (pe1_new + pe2_new);
    if (surplus < 0.0) return {};
    const double k1 = surplus * split;
    return {true, k1, surplus - k1};
}

struct SynthesisOutcome {
    bool accepted = false;
    double new_ke = 0.0;
};

inline SynthesisOutcome synthesis_energy(double pe1, double ke1, double pe2, double ke2,
                                         double pe_new) {
    const double total = pe1 + ke1 + pe2 + ke2;
    if (total < pe_new) return {};
    return {true, total - pe_new};
}

// --- engine ------------------------------------------------------------------

template <typename S>
struct Molecule {
    S structure;
    double pe = 0.0;
    double ke = 0.0;
    long num_hit = 0;   // reactions this molecule has undergone
    long min_hit = 0;   // num_hit at the last personal-best improvement
    double min_pe = 0.0;
    S min_structure;
};

enum class ReactionKind { on_wall, decomposition, intermolecular, synthesis };

struct Reaction {
    ReactionKind kind = ReactionKind::on_wall;
    std::size_t first = 0;
    std::size_t second = 0;  // only meaningful for inter-molecular kinds
};

inline long evaluations_needed(ReactionKind kind) {
    return (kind == ReactionKind::decomposition || kind == ReactionKind::intermolecular) ? 2 : 1;
}

/// Variable-population search over structures of type S. The engine owns the
/// molecules, the central energy buffer and the evaluation budget; structure
/// generation and perturbation are injected. Lower objective values are
/// better. The best structure ever evaluated is retained even if every
/// molecule that carried it is later destroyed.
template <typename S>
class Engine {
public:
    using Objective = std::function<double(const S&)>;
    using Generator = std::function<S(Rng&)>;
    using NeighbourOp = std::function<S(const S&, Rng&)>;
    using DecomposeOp = std::function<std::pair<S, S>(const S&, Rng&)>;
    using SynthesizeOp = std::function<S(const S&, const S&, Rng&)>;
    /// Consulted after every reaction; return true to stop the run.
    using StopCheck = std::function<bool(const Engine&)>;
    using Progress = std::function<void(long fe_count, double best_pe)>;

    Engine(const CroParams& params, const Generator& generate, Objective objective,
           std::uint64_t seed)
        : params_(params), objective_(std::move(objective)), rng_(seed) {
        params_.validate();
        population_.reserve(std::size_t(params_.pop_size) + 1);
        for (int i = 0; i < params_.pop_size; ++i) {
            S s = generate(rng_);
            const double pe = evaluate(s);
            Molecule<S> m;
            m.structure = std::move(s);
            m.pe = pe;
            m.ke = params_.initial_ke;
            m.min_pe = pe;
            m.min_structure = m.structure;
            population_.push_back(std::move(m));
        }
        buffer_ = params_.buffer_init;
        initial_energy_ = total_energy();
    }

    Reaction select_reaction() {
        const double t = rng_.uniform();
        if (t > params_.mole_coll || population_.size() == 1) {
            const std::size_t i = rng_.index(population_.size());
            const Molecule<S>& m = population_[i];
            if (m.num_hit - m.min_hit > params_.decomp_threshold)
                return {ReactionKind::decomposition, i, i};
            return {ReactionKind::on_wall, i, i};
        }
        const std::size_t i = rng_.index(population_.size());
        std::size_t j = rng_.index(population_.size() - 1);
        if (j >= i) ++j;
        if (population_[i].ke <= params_.synth_threshold &&
            population_[j].ke <= params_.synth_threshold)
            return {ReactionKind::synthesis, i, j};
        return {ReactionKind::intermolecular, i, j};
    }

    bool on_wall(std::size_t idx, S candidate) {
        Molecule<S>& m = population_[idx];
        const double pe_new = evaluate(candidate);
        const double retention = rng_.uniform(params_.ke_loss_rate, 1.0);
        const OnWallOutcome out = on_wall_energy(m.pe, m.ke, pe_new, retention);
        m.num_hit += 1;
        if (!out.accepted) return false;
        buffer_ += out.buffer_gain;
        m.structure = std::move(candidate);
        m.pe = pe_new;
        m.ke = out.new_ke;
        note_personal_best(m);
        return true;
    }

    bool decompose(std::size_t idx, S first, S second) {
        Molecule<S>& m = population_[idx];
        const double pe1 = evaluate(first);
        const double pe2 = evaluate(second);
        const double delta1 = rng_.uniform();
        const double delta2 = rng_.uniform();
        const double split = rng_.uniform();
        const DecompositionOutcome out =
            decomposition_energy(m.pe, m.ke, pe1, pe2, buffer_, delta1, delta2, split);
        if (!out.accepted) {
            m.num_hit += 1;
            return false;
        }
        buffer_ -= out.buffer_draw;
        population_[idx] = make_molecule(std::move(first), pe1, out.ke1);
        population_.push_back(make_molecule(std::move(second), pe2, out.ke2));
        return true;
    }

    bool intermolecular(std::size_t i, std::size_t j, S first, S second) {
        Molecule<S>& m1 = population_[i];
        Molecule<S>& m2 = population_[j];
        const double pe1 = evaluate(first);
        const double pe2 = evaluate(second);
        const double split = rng_.uniform();
        const PairOutcome out =
            intermolecular_energy(m1.pe, m1.ke, m2.pe, m2.ke, pe1, pe2, split);
        m1.num_hit += 1;
        m2.num_hit += 1;
        if (!out.accepted) return false;
        m1.structure = std::move(first);
        m1.pe = pe1;
        m1.ke = out.ke1;
        m2.structure = std::move(second);
        m2.pe = pe2;
        m2.ke = out.ke2;
        note_personal_best(m1);
        note_personal_best(m2);
        return true;
    }

    bool synthesize(std::size_t i, std::size_t j, S candidate) {
        Molecule<S>& m1 = population_[i];
        Molecule<S>& m2 = population_[j];
        const double pe_new = evaluate(candidate);
        const SynthesisOutcome out = synthesis_energy(m1.pe, m1.ke, m2.pe, m2.ke, pe_new);
        if (!out.accepted) {
            m1.num_hit += 1;
            m2.num_hit += 1;
            return false;
        }
        const std::size_t lo = std::min(i, j);
        const std::size_t hi = std::max(i, j);
        population_[lo] = make_molecule(std::move(candidate), pe_new, out.new_ke);
        population_.erase(population_.begin() + long(hi));
        return true;
    }

    struct RunResult {
        S best_structure;
        double best_pe = std::numeric_limits<double>::infinity();
        long fe_count = 0;
        bool stopped_by_check = false;
    };

    /// Reaction loop: runs until the evaluation budget is exhausted or the
    /// stop check fires. A reaction whose evaluations would overrun the
    /// budget is not performed, so fe_count never exceeds fe_limit.
    RunResult run(const NeighbourOp& neighbour, const DecomposeOp& decompose_op,
                  const SynthesizeOp& synthesize_op, const StopCheck& stop = {},
                  const Progress& progress = {}) {
        bool stopped = false;
        while (fe_count_ < params_.fe_limit) {
            const Reaction r = select_reaction();
            if (fe_count_ + evaluations_needed(r.kind) > params_.fe_limit) break;
            switch (r.kind) {
                case ReactionKind::on_wall:
                    on_wall(r.first, neighbour(population_[r.first].structure, rng_));
                    break;
                case ReactionKind::decomposition: {
                    auto [a, b] = decompose_op(population_[r.first].structure, rng_);
                    decompose(r.first, std::move(a), std::move(b));
                    break;
                }
                case ReactionKind::intermolecular: {
                    S c1 = neighbour(population_[r.first].structure, rng_);
                    S c2 = neighbour(population_[r.second].structure, rng_);
                    intermolecular(r.first, r.second, std::move(c1), std::move(c2));
                    break;
                }
                case ReactionKind::synthesis: {
                    S merged = synthesize_op(population_[r.first].structure,
                                             population_[r.second].structure, rng_);
                    synthesize(r.first, r.second, std::move(merged));
                    break;
                }
            }
            if (progress) progress(fe_count_, best_pe_);
            if (stop && stop(*this)) {
                stopped = true;
                break;
            }
        }
        return {best_structure_, best_pe_, fe_count_, stopped};
    }

    const std::vector<Molecule<S>>& population() const { return population_; }
    double buffer() const { return buffer_; }
    long fe_count() const { return fe_count_; }
    double best_pe() const { return best_pe_; }
    const S& best_structure() const { return best_structure_; }
    const CroParams& params() const { return params_; }
    double initial_energy() const { return initial_energy_; }
    Rng& rng() { return rng_; }

    double total_energy() const {
        double total = buffer_;
        for (const Molecule<S>& m : population_) total += m.pe + m.ke;
        return total;
    }

private:
    double evaluate(const S& s) {
        const double pe = objective_(s);
        fe_count_ += 1;
        if (pe < best_pe_) {
            best_pe_ = pe;
            best_structure_ = s;
        }
        return pe;
    }

    Molecule<S> make_molecule(S structure, double pe, double ke) {
        Molecule<S> m;
        m.structure = std::move(structure);
        m.pe = pe;
        m.ke = ke;
        m.min_pe = pe;
        m.min_structure = m.structure;
        return m;
    }

    void note_personal_best(Molecule<S>& m) {
        if (m.pe < m.min_pe) {
            m.min_pe = m.pe;
            m.min_structure = m.structure;
            m.min_hit = m.num_hit;
        }
    }

    CroParams params_;
    Objective objective_;
    Rng rng_;
    std::vector<Molecule<S>> population_;
    double buffer_ = 0.0;
    long fe_count_ = 0;
    double best_pe_ = std::numeric_limits<double>::infinity();
    S best_structure_{};
    double initial_energy_ = 0.0;
};

}  // namespace croann::cro
