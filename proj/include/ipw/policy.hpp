#pragma once

// Belief-value policies over possible-worlds domains.
//
//   possibility_ratio — fraction of admissible worlds satisfying a query,
//                       as an exact rational.
//   reliable_belief   — mixes partition point probabilities with within-cell
//                       world ratios: sum_i c(q|r_i) * p_i.
//   expected_error    — quadratic (Brier-style) expected error of a belief
//                       assignment against true statement probabilities.
//   laplace_sequence  — emulates the rule of succession by growing a chain
//                       of deterministic causal rules, one per observation.
//
// Ratios are exact rationals; reliable_belief and expected_error work in
// floating point (they mix exact counts with given decimal probabilities)
// with a 1e-9 comparison tolerance.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ipw/errors.hpp"
#include "ipw/logic.hpp"
#include "ipw/rational.hpp"

namespace ipw {

inline constexpr double kProbabilityTolerance = 1e-9;

enum class PolicyTag { Ratio, Reliable, Point };

inline const char* to_string(PolicyTag tag) {
    switch (tag) {
        case PolicyTag::Ratio: return "ratio";
        case PolicyTag::Reliable: return "reliable";
        case PolicyTag::Point: return "point";
    }
    return "?";
}

struct BeliefEntry {
    Formula statement;
    double belief = 0.0;
    PolicyTag policy = PolicyTag::Ratio;
};

struct BeliefReport {
    std::vector<BeliefEntry> entries;
};

// Mutually exclusive, exhaustive cells r_i with point probabilities p_i.
// Disjointness and cover are relative to a companion world set and are
// validated at each use.
struct PartitionCell {
    Formula event;
    double probability = 0.0;
};

struct Partition {
    std::vector<PartitionCell> cells;

    static Partition trivial(const VocabularyPtr& vocab) {
        return Partition{{PartitionCell{Formula::verum(vocab), 1.0}}};
    }
};

// Throws DomainError naming the first violated partition invariant.
inline void validate_partition(const Partition& partition, const WorldSet& within) {
    if (partition.cells.empty()) throw DomainError("partition has no cells");
    double total = 0.0;
    for (const auto& cell : partition.cells) {
        if (cell.probability < 0.0 || cell.probability > 1.0)
            throw DomainError("partition probability out of [0,1]");
        total += cell.probability;
    }
    if (std::fabs(total - 1.0) > kProbabilityTolerance)
        throw DomainError("partition probabilities sum to " + std::to_string(total) +
                          ", not 1");
    WorldSet covered = WorldSet::none(within.vocab());
    for (std::size_t i = 0; i < partition.cells.size(); ++i) {
        const WorldSet cell = models(partition.cells[i].event) & within;
        if (cell.empty())
            throw DomainError("partition cell " + std::to_string(i) +
                              " is empty on the admissible world set");
        if (!(covered & cell).empty())
            throw DomainError("partition cells overlap on the admissible world set");
        covered = covered | cell;
    }
    if (covered != within)
        throw DomainError("partition cells do not cover the admissible world set");
}

// count(q within W) / |W|, exact.
inline Rational possibility_ratio(const WorldSet& admissible, const Formula& query) {
    if (admissible.empty())
        throw DomainError("possibility ratio is undefined on an empty world set");
    return Rational(count_models(query, admissible), admissible.count());
}

// sum_i c(q|r_i) * p_i with c(q|r_i) the within-cell possibility ratio.
inline double reliable_belief(const WorldSet& admissible, const Partition& partition,
                              const Formula& query) {
    validate_partition(partition, admissible);
    const WorldSet query_worlds = models(query);
    double belief = 0.0;
    for (const auto& cell : partition.cells) {
        const WorldSet cell_worlds = models(cell.event) & admissible;
        const double ratio = static_cast<double>((query_worlds & cell_worlds).count()) /
                             static_cast<double>(cell_worlds.count());
        belief += ratio * cell.probability;
    }
    return belief;
}

// sum over statements of p*(1-b)^2 + (1-p)*b^2. The two lists must pair up
// statement by statement.
inline double expected_error(const std::vector<std::pair<Formula, double>>& beliefs,
                             const std::vector<std::pair<Formula, double>>& true_probs) {
    if (beliefs.size() != true_probs.size())
        throw DomainError("belief and probability lists differ in length");
    double total = 0.0;
    for (std::size_t i = 0; i < beliefs.size(); ++i) {
        if (beliefs[i].first != true_probs[i].first)
            throw DomainError("belief and probability lists disagree on statement " +
                              std::to_string(i));
        const double b = beliefs[i].second;
        const double p = true_probs[i].second;
        if (b < 0.0 || b > 1.0 || p < 0.0 || p > 1.0)
            throw DomainError("belief or probability out of [0,1]");
        total += p * (1.0 - b) * (1.0 - b) + (1.0 - p) * b * b;
    }
    return total;
}

// Causal-chain induction state: one deterministic rule per observed
// occurrence of the target, cause_k -> cause_{k-1} with cause_0 the target.
class InductionState {
public:
    InductionState(std::size_t max_observations, std::size_t free_atoms) {
        const std::size_t total = 1 + max_observations + free_atoms;
        if (total > Vocabulary::kMaxAtoms)
            throw DomainError("induction vocabulary needs " + std::to_string(total) +
                              " atoms, exceeding the cap of " +
                              std::to_string(Vocabulary::kMaxAtoms));
        std::vector<std::string> names;
        names.reserve(total);
        names.push_back("a");
        for (std::size_t i = 1; i <= max_observations; ++i)
            names.push_back("cause" + std::to_string(i));
        for (std::size_t i = 1; i <= free_atoms; ++i)
            names.push_back("free" + std::to_string(i));
        vocab_ = Vocabulary::create(std::move(names));
    }

    const VocabularyPtr& vocab() const noexcept { return vocab_; }
    std::size_t observations() const noexcept { return chain_.size(); }
    std::size_t max_observations() const noexcept {
        return vocab_->size() - 1 - free_atoms_count();
    }
    const std::vector<Formula>& chain() const noexcept { return chain_; }
    Formula target() const { return Formula::atom(vocab_, std::size_t{0}); }

    // Record one more occurrence of the target: posit cause_{N+1} -> cause_N.
    void observe() {
        const std::size_t n = chain_.size();
        if (1 + n >= vocab_->size() || !is_cause(1 + n))
            throw DomainError("no candidate cause atoms left");
        const Formula effect =
            n == 0 ? target() : Formula::atom(vocab_, n);  // cause_n sits at index n
        chain_.push_back(implies(Formula::atom(vocab_, n + 1), effect));
    }

    WorldSet admissible() const { return models(conjunction(vocab_, chain_)); }

    Rational target_ratio() const { return possibility_ratio(admissible(), target()); }

private:
    bool is_cause(std::size_t index) const {
        return vocab_->name(index).rfind("cause", 0) == 0;
    }
    std::size_t free_atoms_count() const {
        std::size_t n = 0;
        for (const auto& name : vocab_->atoms())
            if (name.rfind("free", 0) == 0) ++n;
        return n;
    }

    VocabularyPtr vocab_;
    std::vector<Formula> chain_;
};

// PR_0 .. PR_{n_max} for the growing causal chain. Free atoms are admitted
// into the vocabulary but never constrained; they cancel in every ratio.
inline std::vector<Rational> laplace_sequence(std::size_t n_max, std::size_t free_atoms) {
    InductionState state(n_max, free_atoms);
    std::vector<Rational> ratios;
    ratios.reserve(n_max + 1);
    ratios.push_back(state.target_ratio());
    for (std::size_t n = 1; n <= n_max; ++n) {
        state.observe();
        ratios.push_back(state.target_ratio());
    }
    return ratios;
}

}  // namespace ipw
