#pragma once

// Normal default theories: extension computation and probabilistic
// justification audits.
//
// Extensions are found by enumerating candidate applied-rule subsets and
// keeping exactly the grounded fixed points: starting from the facts and
// axioms, rules fire only once their prerequisite is entailed, with
// justifications checked for consistency against the candidate's final
// believed set. For normal theories this is precisely the classical
// fixed-point definition, and ungrounded self-supporting sets are rejected.
//
// The audit asks whether the remaining rules' justification strengths alone
// already cap the audited rule's conclusion below believable strength given
// the evidence. In standard mode the justification of rule j is read as
// P(consequent_j | prerequisite_j) >= tau and the evidence is the conjunction
// of the facts. In introspective mode each rule is justified relative to
// belief-state atoms L_phi (fresh, unlinked to the object atoms), so the
// conditioning events of distinct rules decouple and nothing can be derived
// about the audited conclusion.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ipw/credal.hpp"
#include "ipw/errors.hpp"
#include "ipw/logic.hpp"
#include "ipw/rational.hpp"

namespace ipw {

class DefaultRule {
public:
    DefaultRule(Formula prerequisite, Formula justification, Formula consequent)
        : prerequisite_(std::move(prerequisite)), justification_(std::move(justification)),
          consequent_(std::move(consequent)) {
        detail::require_same_vocab(prerequisite_.vocab(), justification_.vocab());
        detail::require_same_vocab(prerequisite_.vocab(), consequent_.vocab());
        if (justification_ != consequent_)
            throw DomainError("rule is not normal: justification '" +
                              justification_.render() + "' differs from consequent '" +
                              consequent_.render() + "'");
    }

    static DefaultRule normal(Formula prerequisite, Formula consequent) {
        Formula justification = consequent;
        return DefaultRule(std::move(prerequisite), std::move(justification),
                           std::move(consequent));
    }

    const Formula& prerequisite() const noexcept { return prerequisite_; }
    const Formula& justification() const noexcept { return justification_; }
    const Formula& consequent() const noexcept { return consequent_; }

private:
    Formula prerequisite_, justification_, consequent_;
};

class DefaultTheory {
public:
    static constexpr std::size_t kMaxDefaults = 12;

    DefaultTheory(VocabularyPtr vocab, std::vector<Formula> facts,
                  std::vector<Formula> axioms, std::vector<DefaultRule> defaults)
        : vocab_(std::move(vocab)), facts_(std::move(facts)), axioms_(std::move(axioms)),
          defaults_(std::move(defaults)) {
        if (!vocab_) throw DomainError("null vocabulary");
        if (defaults_.size() > kMaxDefaults)
            throw DomainError("theories are capped at " + std::to_string(kMaxDefaults) +
                              " defaults");
        for (const auto& f : facts_) detail::require_same_vocab(vocab_, f.vocab());
        for (const auto& f : axioms_) detail::require_same_vocab(vocab_, f.vocab());
        for (const auto& r : defaults_)
            detail::require_same_vocab(vocab_, r.prerequisite().vocab());
        if (certain_worlds().empty())
            throw DomainError("facts and axioms are jointly unsatisfiable");
    }

    const VocabularyPtr& vocab() const noexcept { return vocab_; }
    const std::vector<Formula>& facts() const noexcept { return facts_; }
    const std::vector<Formula>& axioms() const noexcept { return axioms_; }
    const std::vector<DefaultRule>& defaults() const noexcept { return defaults_; }

    // Worlds compatible with everything held certain.
    WorldSet certain_worlds() const {
        return models(conjunction(vocab_, facts_)) & models(conjunction(vocab_, axioms_));
    }

    // Worlds restricted by axioms only; facts act as evidence, not structure.
    WorldSet axiom_worlds() const { return models(conjunction(vocab_, axioms_)); }

private:
    VocabularyPtr vocab_;
    std::vector<Formula> facts_;
    std::vector<Formula> axioms_;
    std::vector<DefaultRule> defaults_;
};

struct Extension {
    WorldSet believed;
    std::set<std::size_t> applied;
};

// Verifies the extension fixed point against a theory: every applied rule is
// applicable, no applicable rule is unapplied, the applied set is grounded,
// and the believed set is the closure of facts, axioms and consequents.
inline bool verify_extension(const DefaultTheory& theory, const Extension& extension) {
    if (extension.believed.empty()) return false;

    std::vector<Formula> believed_parts = theory.facts();
    for (const auto& axiom : theory.axioms()) believed_parts.push_back(axiom);
    for (auto idx : extension.applied) {
        if (idx >= theory.defaults().size()) return false;
        believed_parts.push_back(theory.defaults()[idx].consequent());
    }
    if (models(conjunction(theory.vocab(), believed_parts)) != extension.believed)
        return false;

    // Grounded closure: fire rules only when the prerequisite is already
    // entailed; justification consistency is judged against the final set.
    std::set<std::size_t> fired;
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Formula> stage_parts = theory.facts();
        for (const auto& axiom : theory.axioms()) stage_parts.push_back(axiom);
        for (auto idx : fired) stage_parts.push_back(theory.defaults()[idx].consequent());
        const WorldSet stage = models(conjunction(theory.vocab(), stage_parts));
        for (std::size_t j = 0; j < theory.defaults().size(); ++j) {
            if (fired.count(j)) continue;
            const auto& rule = theory.defaults()[j];
            const bool prereq_holds = entails(stage, rule.prerequisite());
            const bool consistent =
                !(extension.believed & models(rule.justification())).empty();
            if (prereq_holds && consistent) {
                fired.insert(j);
                grew = true;
            }
        }
    }
    return fired == extension.applied;
}

// All extensions of the theory, deterministically ordered by applied-rule
// mask. Candidates are the 2^|defaults| application subsets; duplicates with
// the same believed set are coalesced.
inline std::vector<Extension> compute_extensions(const DefaultTheory& theory) {
    const std::size_t d = theory.defaults().size();
    std::vector<Extension> found;
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
        Extension candidate{WorldSet::none(theory.vocab()), {}};
        std::vector<Formula> parts = theory.facts();
        for (const auto& axiom : theory.axioms()) parts.push_back(axiom);
        for (std::size_t j = 0; j < d; ++j) {
            if ((mask >> j) & 1u) {
                candidate.applied.insert(j);
                parts.push_back(theory.defaults()[j].consequent());
            }
        }
        candidate.believed = models(conjunction(theory.vocab(), parts));
        if (!verify_extension(theory, candidate)) continue;
        const bool duplicate =
            std::any_of(found.begin(), found.end(), [&](const Extension& e) {
                return e.believed == candidate.believed;
            });
        if (!duplicate) found.push_back(std::move(candidate));
    }
    return found;
}

enum class AuditMode { Standard, Introspective };

inline const char* to_string(AuditMode mode) {
    return mode == AuditMode::Standard ? "standard" : "introspective";
}

enum class AuditOutcome { ProvablyIrrelevant, NotProvablyIrrelevant };

inline const char* to_string(AuditOutcome v) {
    return v == AuditOutcome::ProvablyIrrelevant ? "provably_irrelevant"
                                                 : "not_provably_irrelevant";
}

struct AuditConfig {
    Rational tau_justify = Rational(9, 10);
    Rational tau_believe = Rational(9, 10);
    // Introspective mode only: add truthfulness axioms L_phi -> phi. Off by
    // default; belief atoms carry no object-level commitment.
    bool link_belief_atoms = false;
};

struct AuditVerdict {
    std::size_t rule_index;
    AuditMode mode;
    AuditOutcome outcome;
    Rational upper_bound;  // sharpest derivable bound on P(consequent | evidence)
    Formula evidence;
};

namespace detail {

// Readable fresh names for belief-state atoms: L_a, L_not_b, ...
inline std::string modal_name(const Formula& f) {
    std::string out = "L_";
    for (const char c : f.render()) {
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
            c == '_') {
            out += c;
        } else if (c == '!') {
            out += "not_";
        }
        // operators and parentheses are dropped
    }
    return out;
}

}  // namespace detail

// Audits one rule's probabilistic justification for provable irrelevance.
inline AuditVerdict audit_rule(const DefaultTheory& theory, std::size_t rule_index,
                               AuditMode mode, const AuditConfig& config = {}) {
    if (rule_index >= theory.defaults().size())
        throw DomainError("no default rule with index " + std::to_string(rule_index));
    if (config.tau_justify <= 0 || config.tau_justify >= 1 || config.tau_believe <= 0 ||
        config.tau_believe >= 1)
        throw DomainError("audit thresholds must lie strictly between 0 and 1");

    // Precondition: the rule is applicable in at least one extension.
    const auto extensions = compute_extensions(theory);
    const bool applicable =
        std::any_of(extensions.begin(), extensions.end(), [&](const Extension& e) {
            return e.applied.count(rule_index) > 0;
        });
    if (!applicable)
        throw DomainError("rule " + std::to_string(rule_index) +
                          " is not applied in any extension");

    Rational upper_bound;
    std::optional<Formula> evidence_used;

    if (mode == AuditMode::Standard) {
        const WorldSet worlds = theory.axiom_worlds();
        std::vector<CredalConstraint> constraints;
        for (std::size_t j = 0; j < theory.defaults().size(); ++j) {
            if (j == rule_index) continue;
            constraints.push_back(CredalConstraint::conditional(
                theory.defaults()[j].consequent(), theory.defaults()[j].prerequisite(),
                config.tau_justify, 1));
        }
        const Formula evidence = conjunction(theory.vocab(), theory.facts());
        const auto bounds = query_bounds(worlds, constraints,
                                         theory.defaults()[rule_index].consequent(),
                                         evidence);
        upper_bound = bounds.hi;
        evidence_used = evidence;
    } else {
        // Extend the vocabulary with one fresh belief atom per fact, per rule
        // prerequisite, and per negated rule consequent. The atoms are not
        // linked to the object atoms they mention.
        std::vector<std::string> names = theory.vocab()->atoms();
        std::vector<Formula> modal_sources;
        auto add_modal = [&](const Formula& f) {
            for (const auto& seen : modal_sources)
                if (seen == f) return;
            modal_sources.push_back(f);
            std::string name = detail::modal_name(f);
            while (std::find(names.begin(), names.end(), name) != names.end())
                name += "_";
            names.push_back(std::move(name));
        };
        for (const auto& fact : theory.facts()) add_modal(fact);
        for (const auto& rule : theory.defaults()) {
            add_modal(rule.prerequisite());
            add_modal(!rule.consequent());
        }
        const VocabularyPtr extended = Vocabulary::create(names);
        const std::size_t object_atoms = theory.vocab()->size();
        auto modal_atom = [&](const Formula& f) {
            for (std::size_t i = 0; i < modal_sources.size(); ++i)
                if (modal_sources[i] == f)
                    return Formula::atom(extended, object_atoms + i);
            throw Error("belief atom lookup failed");
        };

        std::vector<Formula> axioms;
        axioms.reserve(theory.axioms().size());
        for (const auto& axiom : theory.axioms()) axioms.push_back(axiom.rebind(extended));
        if (config.link_belief_atoms)
            for (std::size_t i = 0; i < modal_sources.size(); ++i)
                axioms.push_back(implies(Formula::atom(extended, object_atoms + i),
                                         modal_sources[i].rebind(extended)));
        const WorldSet worlds = models(conjunction(extended, axioms));

        std::vector<CredalConstraint> constraints;
        for (std::size_t j = 0; j < theory.defaults().size(); ++j) {
            if (j == rule_index) continue;
            const auto& rule = theory.defaults()[j];
            const Formula event =
                modal_atom(rule.prerequisite()) & !modal_atom(!rule.consequent());
            constraints.push_back(CredalConstraint::conditional(
                rule.consequent().rebind(extended), event, config.tau_justify, 1));
        }

        const auto& audited = theory.defaults()[rule_index];
        Formula evidence =
            modal_atom(audited.prerequisite()) & !modal_atom(!audited.consequent());
        for (const auto& fact : theory.facts()) evidence = evidence & modal_atom(fact);

        const auto bounds = query_bounds(worlds, constraints,
                                         audited.consequent().rebind(extended), evidence);
        upper_bound = bounds.hi;
        evidence_used = evidence;
    }

    return AuditVerdict{rule_index, mode,
                        upper_bound < config.tau_believe
                            ? AuditOutcome::ProvablyIrrelevant
                            : AuditOutcome::NotProvablyIrrelevant,
                        upper_bound, *evidence_used};
}

}  // namespace ipw
