#pragma once

// Interval/conditional probability constraints over world masses.
//
// A constraint P(t|g) in [lo, hi] compiles to two homogeneous rows over the
// nonnegative mass vector x indexed by admissible worlds:
//
//     sum_{w |= t&g} x_w - lo * sum_{w |= g} x_w >= 0
//     hi * sum_{w |= g} x_w - sum_{w |= t&g} x_w >= 0
//
// together with the normalization sum x_w = 1. Certain knowledge (axioms)
// restricts the admissible world set instead of adding rows. Conditional
// query bounds use the Charnes-Cooper substitution y = t*x, which also
// detects conditioning events of forced probability zero: the transformed
// system is infeasible exactly when every satisfying mass vector gives the
// event probability zero.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ipw/errors.hpp"
#include "ipw/logic.hpp"
#include "ipw/rational.hpp"
#include "ipw/simplex.hpp"

namespace ipw {

class CredalConstraint {
public:
    CredalConstraint(Formula target, Formula given, Rational lo, Rational hi)
        : target_(std::move(target)), given_(std::move(given)),
          lo_(std::move(lo)), hi_(std::move(hi)) {
        detail::require_same_vocab(target_.vocab(), given_.vocab());
        if (lo_ < 0 || hi_ > 1 || lo_ > hi_)
            throw DomainError("constraint bounds must satisfy 0 <= lo <= hi <= 1");
    }

    static CredalConstraint point(Formula target, Rational p) {
        Formula given = Formula::verum(target.vocab());
        return CredalConstraint(std::move(target), std::move(given), p, p);
    }

    static CredalConstraint interval(Formula target, Rational lo, Rational hi) {
        Formula given = Formula::verum(target.vocab());
        return CredalConstraint(std::move(target), std::move(given), std::move(lo),
                                std::move(hi));
    }

    static CredalConstraint conditional(Formula target, Formula given, Rational lo,
                                        Rational hi) {
        return CredalConstraint(std::move(target), std::move(given), std::move(lo),
                                std::move(hi));
    }

    const Formula& target() const noexcept { return target_; }
    const Formula& given() const noexcept { return given_; }
    const Rational& lo() const noexcept { return lo_; }
    const Rational& hi() const noexcept { return hi_; }
    bool is_conditional() const { return given_.kind() != Formula::Kind::True; }

private:
    Formula target_;
    Formula given_;
    Rational lo_, hi_;
};

struct ExpertAssessment {
    std::string id;
    std::vector<std::pair<Formula, Rational>> judgments;
};

struct ProbabilityInterval {
    Rational lo, hi;
};

namespace detail {

// Homogeneous constraint rows over the listed worlds; `stride` leaves room
// for extra variables (the Charnes-Cooper t) at the end.
inline std::vector<LinearConstraint> compile_rows(
    const std::vector<World>& worlds, const std::vector<CredalConstraint>& constraints,
    std::size_t stride) {
    std::vector<LinearConstraint> rows;
    rows.reserve(2 * constraints.size());
    for (const auto& c : constraints) {
        const WorldSet target_set = models(c.target());
        const WorldSet given_set = models(c.given());
        if (c.lo() > 0) {
            LinearConstraint row{std::vector<Rational>(stride, Rational(0)),
                                 Relation::GreaterEq, 0};
            for (std::size_t v = 0; v < worlds.size(); ++v) {
                const bool in_given = given_set.contains(worlds[v]);
                if (!in_given) continue;
                row.coeffs[v] = target_set.contains(worlds[v]) ? Rational(1) - c.lo()
                                                               : -c.lo();
            }
            rows.push_back(std::move(row));
        }
        if (c.hi() < 1) {
            LinearConstraint row{std::vector<Rational>(stride, Rational(0)),
                                 Relation::GreaterEq, 0};
            for (std::size_t v = 0; v < worlds.size(); ++v) {
                const bool in_given = given_set.contains(worlds[v]);
                if (!in_given) continue;
                row.coeffs[v] = target_set.contains(worlds[v]) ? c.hi() - Rational(1)
                                                               : c.hi();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

inline void check_constraint_vocab(const WorldSet& worlds,
                                   const std::vector<CredalConstraint>& constraints) {
    for (const auto& c : constraints)
        require_same_vocab(worlds.vocab(), c.target().vocab());
}

}  // namespace detail

// True iff some probability mass vector over `worlds` satisfies every
// constraint. An empty admissible set is infeasible.
inline bool feasible(const WorldSet& worlds,
                     const std::vector<CredalConstraint>& constraints) {
    detail::check_constraint_vocab(worlds, constraints);
    if (worlds.empty()) return false;
    const std::vector<World> members = worlds.members();

    LinearProgram lp;
    lp.num_vars = members.size();
    lp.rows = detail::compile_rows(members, constraints, members.size());
    lp.rows.push_back(LinearConstraint{
        std::vector<Rational>(members.size(), Rational(1)), Relation::Equal, 1});
    lp.objective.assign(members.size(), Rational(0));
    return solve(lp).status == LpStatus::Optimal;
}

// Sharpest derivable bounds on P(query | given) over all mass vectors
// satisfying the constraints. Exact via fractional-linear reformulation.
inline ProbabilityInterval query_bounds(const WorldSet& worlds,
                                        const std::vector<CredalConstraint>& constraints,
                                        const Formula& query, const Formula& given) {
    detail::check_constraint_vocab(worlds, constraints);
    detail::require_same_vocab(worlds.vocab(), query.vocab());
    detail::require_same_vocab(worlds.vocab(), given.vocab());
    if (worlds.count() > 4096)
        throw DomainError("bounds query exceeds the 4096-world cap");
    if (!feasible(worlds, constraints))
        throw InfeasibleError("constraint set is infeasible");

    const std::vector<World> members = worlds.members();
    const std::size_t n = members.size();
    const std::size_t t_var = n;  // Charnes-Cooper scale variable

    LinearProgram lp;
    lp.num_vars = n + 1;
    lp.rows = detail::compile_rows(members, constraints, n + 1);

    // sum y - t = 0
    LinearConstraint scale{std::vector<Rational>(n + 1, Rational(1)), Relation::Equal, 0};
    scale.coeffs[t_var] = -1;
    lp.rows.push_back(std::move(scale));

    // sum_{w |= given} y = 1
    const WorldSet given_set = models(given);
    LinearConstraint denom{std::vector<Rational>(n + 1, Rational(0)), Relation::Equal, 1};
    for (std::size_t v = 0; v < n; ++v)
        if (given_set.contains(members[v])) denom.coeffs[v] = 1;
    lp.rows.push_back(std::move(denom));

    const WorldSet numer_set = models(query) & given_set;
    lp.objective.assign(n + 1, Rational(0));
    for (std::size_t v = 0; v < n; ++v)
        if (numer_set.contains(members[v])) lp.objective[v] = 1;

    lp.maximize = false;
    const LpSolution lo = solve(lp);
    if (lo.status == LpStatus::Infeasible)
        throw ConditioningError("conditioning event has probability zero in every "
                                "satisfying distribution");
    lp.maximize = true;
    const LpSolution hi = solve(lp);
    if (lo.status != LpStatus::Optimal || hi.status != LpStatus::Optimal)
        throw Error("bounds query did not reach an optimum");
    return ProbabilityInterval{lo.objective_value, hi.objective_value};
}

inline ProbabilityInterval query_bounds(const WorldSet& worlds,
                                        const std::vector<CredalConstraint>& constraints,
                                        const Formula& query) {
    return query_bounds(worlds, constraints, query, Formula::verum(worlds.vocab()));
}

// Envelope merge of expert point assessments: per statement (up to logical
// equivalence), the interval [min over experts, max over experts]. Each
// expert must be individually consistent.
inline std::vector<CredalConstraint> merge_experts(
    const std::vector<ExpertAssessment>& assessments) {
    struct Entry {
        Formula statement;
        Rational lo, hi;
    };
    std::vector<Entry> entries;
    std::vector<std::vector<std::uint64_t>> keys;  // model-set bits per entry
    VocabularyPtr common;

    for (const auto& expert : assessments) {
        if (expert.judgments.empty()) continue;
        const VocabularyPtr vocab = expert.judgments.front().first.vocab();
        if (!common)
            common = vocab;
        else
            detail::require_same_vocab(common, vocab);
        for (const auto& [statement, p] : expert.judgments)
            detail::require_same_vocab(common, statement.vocab());

        std::vector<CredalConstraint> own;
        own.reserve(expert.judgments.size());
        for (const auto& [statement, p] : expert.judgments) {
            if (p < 0 || p > 1)
                throw DomainError("expert '" + expert.id + "' assigns probability " +
                                  to_fraction_string(p) + " outside [0,1]");
            own.push_back(CredalConstraint::point(statement, p));
        }
        if (!feasible(WorldSet::all(vocab), own))
            throw InfeasibleError("expert '" + expert.id +
                                  "' assessments are jointly infeasible");

        for (const auto& [statement, p] : expert.judgments) {
            const auto key = models(statement).words();
            std::size_t slot = entries.size();
            for (std::size_t i = 0; i < keys.size(); ++i) {
                if (keys[i] == key) {
                    slot = i;
                    break;
                }
            }
            if (slot == entries.size()) {
                keys.push_back(key);
                entries.push_back(Entry{statement, p, p});
            } else {
                if (p < entries[slot].lo) entries[slot].lo = p;
                if (p > entries[slot].hi) entries[slot].hi = p;
            }
        }
    }

    std::vector<CredalConstraint> merged;
    merged.reserve(entries.size());
    for (auto& e : entries)
        merged.push_back(CredalConstraint::interval(std::move(e.statement), e.lo, e.hi));
    return merged;
}

}  // namespace ipw
