#pragma once

// Monte Carlo verification of reliability claims.
//
//   run_two_experts   — two calibrated advisors with unknown redundancy;
//                       compares follow-one, averaging, and naive
//                       independence fusion policies.
//   reliability_audit — random small possible-worlds domains; scores the
//                       pure-ratio and mixed-calculus policies over every
//                       statement equivalence class at once.
//
// Determinism: trial i draws from a stream derived from (seed, i), trials
// are folded into fixed-size chunks, and chunk results merge in index
// order, so reports are bit-identical for any thread count.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "ipw/calibration.hpp"
#include "ipw/errors.hpp"
#include "ipw/logic.hpp"
#include "ipw/policy.hpp"

namespace ipw {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Counter-seeded splitmix64 stream.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t trial)
        : state_(mix64(seed ^ mix64(trial + 1))) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

private:
    std::uint64_t state_;
};

inline constexpr std::uint64_t kChunkTrials = 4096;

// Fixed-chunk deterministic parallel fold. State needs merge(const State&).
template <typename State, typename PerTrial>
State run_chunked(std::uint64_t trials, unsigned threads, const State& init,
                  PerTrial per_trial) {
    const std::uint64_t num_chunks = (trials + kChunkTrials - 1) / kChunkTrials;
    std::vector<State> partials(static_cast<std::size_t>(num_chunks), init);

    unsigned workers = threads == 0 ? std::thread::hardware_concurrency() : threads;
    if (workers == 0) workers = 1;
    if (workers > num_chunks) workers = static_cast<unsigned>(num_chunks);

    std::atomic<std::uint64_t> next_chunk{0};
    auto work = [&] {
        while (true) {
            const std::uint64_t chunk = next_chunk.fetch_add(1);
            if (chunk >= num_chunks) return;
            const std::uint64_t begin = chunk * kChunkTrials;
            const std::uint64_t end = std::min(trials, begin + kChunkTrials);
            for (std::uint64_t trial = begin; trial < end; ++trial)
                per_trial(partials[static_cast<std::size_t>(chunk)], trial);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    State result = init;
    for (const auto& partial : partials) result.merge(partial);
    return result;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Two-experts scenario
// ---------------------------------------------------------------------------

struct TwoExpertsConfig {
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    double quality1 = 0.9;      // expert1 signal accuracy, in (0.5, 1)
    double quality2 = 0.7;      // expert2 independent-draw accuracy, <= quality1
    double redundancy = 0.0;    // probability expert2's signal copies expert1's
    double base_rate = 0.5;
    int bins = 10;
    std::uint64_t min_bin_count = 30;
    unsigned threads = 0;       // 0 = hardware concurrency
};

enum class ExpertPolicy { FollowExpert1, FollowExpert2, Average, IndependentFusion };

inline const char* to_string(ExpertPolicy p) {
    switch (p) {
        case ExpertPolicy::FollowExpert1: return "follow_expert1";
        case ExpertPolicy::FollowExpert2: return "follow_expert2";
        case ExpertPolicy::Average: return "average";
        case ExpertPolicy::IndependentFusion: return "independent_fusion";
    }
    return "?";
}

inline constexpr ExpertPolicy kExpertPolicies[] = {
    ExpertPolicy::FollowExpert1, ExpertPolicy::FollowExpert2, ExpertPolicy::Average,
    ExpertPolicy::IndependentFusion};

// Exact posterior P(truth | signal) for a signal that matches the truth with
// probability `quality`.
inline double expert_posterior(double quality, double base_rate, bool signal) {
    const double likely = signal ? quality : 1.0 - quality;
    const double unlikely = signal ? 1.0 - quality : quality;
    return likely * base_rate / (likely * base_rate + unlikely * (1.0 - base_rate));
}

namespace detail {

inline void validate(const TwoExpertsConfig& config) {
    if (config.trials == 0) throw DomainError("trials must be positive");
    if (!(config.quality1 > 0.5 && config.quality1 < 1.0) ||
        !(config.quality2 > 0.5 && config.quality2 < 1.0))
        throw DomainError("signal qualities must lie in (0.5, 1)");
    if (config.quality1 < config.quality2)
        throw DomainError("expert1 must be at least as sharp as expert2");
    if (config.redundancy < 0.0 || config.redundancy > 1.0)
        throw DomainError("redundancy must lie in [0,1]");
    if (config.base_rate <= 0.0 || config.base_rate >= 1.0)
        throw DomainError("base rate must lie in (0,1)");
    if (config.bins < 1) throw DomainError("at least one bin is required");
}

struct TwoExpertsState {
    std::vector<CalibrationAccumulator> per_policy;

    explicit TwoExpertsState(int bins)
        : per_policy(4, CalibrationAccumulator(bins)) {}

    void merge(const TwoExpertsState& other) {
        for (std::size_t i = 0; i < per_policy.size(); ++i)
            per_policy[i].merge(other.per_policy[i]);
    }
};

}  // namespace detail

// One calibration report per policy, in kExpertPolicies order.
inline std::vector<CalibrationReport> run_two_experts(const TwoExpertsConfig& config) {
    detail::validate(config);

    // Expert2's marginal signal accuracy includes the chance of copying
    // expert1; reporting the exact posterior keeps it calibrated at any
    // redundancy level.
    const double quality2_effective =
        config.redundancy * config.quality1 + (1.0 - config.redundancy) * config.quality2;

    const auto final_state = detail::run_chunked(
        config.trials, config.threads, detail::TwoExpertsState(config.bins),
        [&](detail::TwoExpertsState& state, std::uint64_t trial) {
            detail::TrialRng rng(config.seed, trial);
            const double u_truth = rng.uniform();
            const double u_signal1 = rng.uniform();
            const double u_copy = rng.uniform();
            const double u_signal2 = rng.uniform();

            const bool truth = u_truth < config.base_rate;
            const bool signal1 = u_signal1 < config.quality1 ? truth : !truth;
            const bool signal2 = u_copy < config.redundancy
                                     ? signal1
                                     : (u_signal2 < config.quality2 ? truth : !truth);

            const double p1 = expert_posterior(config.quality1, config.base_rate, signal1);
            const double p2 = expert_posterior(quality2_effective, config.base_rate, signal2);

            const double prior_logit =
                std::log(config.base_rate / (1.0 - config.base_rate));
            const double fused_logit = std::log(p1 / (1.0 - p1)) +
                                       std::log(p2 / (1.0 - p2)) - prior_logit;
            const double fused = 1.0 / (1.0 + std::exp(-fused_logit));

            const double reports[4] = {p1, p2, 0.5 * (p1 + p2), fused};
            for (int i = 0; i < 4; ++i) state.per_policy[i].add(reports[i], truth);
        });

    std::vector<CalibrationReport> reports;
    reports.reserve(4);
    for (int i = 0; i < 4; ++i)
        reports.push_back(final_state.per_policy[i].report(
            to_string(kExpertPolicies[i]), config.min_bin_count));
    return reports;
}

// ---------------------------------------------------------------------------
// Reliability audit over random possible-worlds domains
// ---------------------------------------------------------------------------

enum class PartitionSource { None, SingleMarginal };

inline const char* to_string(PartitionSource s) {
    return s == PartitionSource::None ? "none" : "single-marginal";
}

struct ReliabilityAuditConfig {
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    std::size_t vocab_size = 4;  // at most 4 atoms, so |W| <= 16
    double axiom_density = 0.5;
    PartitionSource partition_source = PartitionSource::SingleMarginal;
    int bins = 10;
    std::uint64_t min_bin_count = 30;
    unsigned threads = 0;
};

// One group of statement classes sharing a per-cell intersection signature:
// all 2^|W| statement classes, grouped by (|S & cell_i|)_i.
struct StatementClassGroup {
    std::vector<std::size_t> cell_counts;  // k_i = |S & cell_i & W|
    double belief = 0.0;                   // sum_i p_i * k_i / m_i
    std::uint64_t count = 0;               // number of classes in the group
    std::uint64_t truths = 0;              // how many contain the true world
};

namespace detail {

inline constexpr int kMaxAuditWorlds = 16;

inline std::uint64_t binomial(std::size_t n, std::size_t k) {
    static const auto table = [] {
        std::array<std::array<std::uint64_t, kMaxAuditWorlds + 1>, kMaxAuditWorlds + 1> c{};
        for (std::size_t i = 0; i <= kMaxAuditWorlds; ++i) {
            c[i][0] = 1;
            for (std::size_t j = 1; j <= i; ++j)
                c[i][j] = c[i - 1][j - 1] + (j <= i - 1 ? c[i - 1][j] : 0);
        }
        return c;
    }();
    if (k > n) return 0;
    return table[n][k];
}

}  // namespace detail

// Aggregates every statement equivalence class (world subset of W) by its
// per-cell intersection sizes; exact combinatorial counting.
inline std::vector<StatementClassGroup> statement_class_profile(
    const WorldSet& admissible, const Partition& partition, World true_world) {
    validate_partition(partition, admissible);
    if (!admissible.contains(true_world))
        throw DomainError("true world lies outside the admissible set");
    if (admissible.count() > detail::kMaxAuditWorlds)
        throw DomainError("statement profiles are capped at 16 admissible worlds");

    const std::size_t cells = partition.cells.size();
    std::vector<std::size_t> sizes(cells);
    std::size_t true_cell = cells;
    for (std::size_t i = 0; i < cells; ++i) {
        const WorldSet in_cell = models(partition.cells[i].event) & admissible;
        sizes[i] = in_cell.count();
        if (in_cell.contains(true_world)) true_cell = i;
    }

    std::vector<StatementClassGroup> groups;
    std::vector<std::size_t> counts(cells, 0);
    // Enumerate all (k_1..k_c) signatures recursively.
    auto emit = [&](auto&& self, std::size_t cell) -> void {
        if (cell == cells) {
            StatementClassGroup group;
            group.cell_counts = counts;
            std::uint64_t combos = 1, holding = 1;
            double belief = 0.0;
            for (std::size_t i = 0; i < cells; ++i) {
                combos *= detail::binomial(sizes[i], counts[i]);
                if (i == true_cell)
                    holding *= counts[i] == 0
                                   ? 0
                                   : detail::binomial(sizes[i] - 1, counts[i] - 1);
                else
                    holding *= detail::binomial(sizes[i], counts[i]);
                belief += partition.cells[i].probability * static_cast<double>(counts[i]) /
                          static_cast<double>(sizes[i]);
            }
            group.count = combos;
            group.truths = holding;
            group.belief = belief;
            groups.push_back(std::move(group));
            return;
        }
        for (counts[cell] = 0; counts[cell] <= sizes[cell]; ++counts[cell])
            self(self, cell + 1);
        counts[cell] = 0;
    };
    emit(emit, 0);
    return groups;
}

namespace detail {

inline void validate(const ReliabilityAuditConfig& config) {
    if (config.trials == 0) throw DomainError("trials must be positive");
    if (config.vocab_size < 1 || config.vocab_size > 4)
        throw DomainError("audit vocabularies are capped at 4 atoms");
    if (config.axiom_density < 0.0 || config.axiom_density > 1.0)
        throw DomainError("axiom density must lie in [0,1]");
    if (config.bins < 1) throw DomainError("at least one bin is required");
}

struct AuditState {
    CalibrationAccumulator accum;
    explicit AuditState(int bins) : accum(bins) {}
    void merge(const AuditState& other) { accum.merge(other.accum); }
};

// One random admissible world set: a handful of random literal implications,
// resampled until satisfiable.
inline WorldSet random_domain(TrialRng& rng, const VocabularyPtr& vocab, double density) {
    if (vocab->size() < 2) return WorldSet::all(vocab);  // no implications possible
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<Formula> axioms;
        for (std::size_t k = 0; k < vocab->size(); ++k) {
            if (rng.uniform() >= density) continue;
            const std::size_t from = rng.below(vocab->size());
            std::size_t to = rng.below(vocab->size() - 1);
            if (to >= from) ++to;
            Formula lhs = Formula::atom(vocab, from);
            Formula rhs = Formula::atom(vocab, to);
            if (rng.below(2)) lhs = !lhs;
            if (rng.below(2)) rhs = !rhs;
            axioms.push_back(implies(lhs, rhs));
        }
        WorldSet worlds = models(conjunction(vocab, axioms));
        if (!worlds.empty()) return worlds;
    }
    return WorldSet::all(vocab);
}

inline Partition random_partition(TrialRng& rng, const VocabularyPtr& vocab,
                                  const WorldSet& worlds, PartitionSource source) {
    if (source == PartitionSource::SingleMarginal) {
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i < vocab->size(); ++i) {
            const WorldSet pos = models(Formula::atom(vocab, i)) & worlds;
            if (!pos.empty() && pos.count() < worlds.count()) candidates.push_back(i);
        }
        if (!candidates.empty()) {
            const Formula atom =
                Formula::atom(vocab, candidates[rng.below(candidates.size())]);
            const double p = 0.05 + 0.9 * rng.uniform();
            return Partition{{{atom, p}, {!atom, 1.0 - p}}};
        }
    }
    return Partition::trivial(vocab);
}

}  // namespace detail

inline CalibrationReport reliability_audit(const ReliabilityAuditConfig& config) {
    detail::validate(config);
    const VocabularyPtr vocab = [&] {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < config.vocab_size; ++i)
            names.push_back(std::string(1, static_cast<char>('a' + i)));
        return Vocabulary::create(std::move(names));
    }();

    const auto final_state = detail::run_chunked(
        config.trials, config.threads, detail::AuditState(config.bins),
        [&](detail::AuditState& state, std::uint64_t trial) {
            detail::TrialRng rng(config.seed, trial);
            const WorldSet worlds =
                detail::random_domain(rng, vocab, config.axiom_density);
            const Partition partition =
                detail::random_partition(rng, vocab, worlds, config.partition_source);

            // Sample the true world: cell by stated probability, uniform
            // inside the cell.
            std::size_t cell = 0;
            if (partition.cells.size() > 1) {
                const double u = rng.uniform();
                double acc = 0.0;
                for (std::size_t i = 0; i < partition.cells.size(); ++i) {
                    acc += partition.cells[i].probability;
                    if (u < acc) {
                        cell = i;
                        break;
                    }
                    cell = i;
                }
            }
            const std::vector<World> members =
                (models(partition.cells[cell].event) & worlds).members();
            const World true_world = members[rng.below(members.size())];

            for (const auto& group :
                 statement_class_profile(worlds, partition, true_world))
                state.accum.add_group(group.belief, group.count, group.truths);
        });

    return final_state.accum.report(
        config.partition_source == PartitionSource::None ? "ratio" : "reliable",
        config.min_bin_count);
}

}  // namespace ipw
