#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cstdint>

#include "ipw/logic.hpp"
#include "ipw/parse.hpp"
#include "ipw/policy.hpp"
#include "support/random_formulas.hpp"
#include "support/test_rng.hpp"

using namespace ipw;
using ipw_test::random_formula;
using ipw_test::Rng;

namespace {

VocabularyPtr ab() { return Vocabulary::create({"a", "b"}); }

Partition marginal(const VocabularyPtr& vocab, const std::string& atom, double p) {
    const Formula f = Formula::atom(vocab, atom);
    return Partition{{{f, p}, {!f, 1.0 - p}}};
}

}  // namespace

TEST_CASE("possibility ratio of the implication example") {
    auto vocab = ab();
    const WorldSet w = models(parse_formula("a -> b", vocab));
    CHECK(possibility_ratio(w, parse_formula("b", vocab)) == Rational(2, 3));
    CHECK(possibility_ratio(w, parse_formula("a", vocab)) == Rational(1, 3));

    auto single = Vocabulary::create({"a"});
    CHECK(possibility_ratio(WorldSet::all(single), Formula::atom(single, "a")) ==
          Rational(1, 2));

    CHECK_THROWS_AS(possibility_ratio(WorldSet::none(vocab), Formula::atom(vocab, "a")),
                    DomainError);
}

TEST_CASE("property: possibility ratios of a statement and its negation sum to 1") {
    auto vocab = Vocabulary::create({"a", "b", "c"});
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const WorldSet w = models(random_formula(rng, vocab, 3));
        if (w.empty()) continue;
        const Formula q = random_formula(rng, vocab, 3);
        CHECK(possibility_ratio(w, q) + possibility_ratio(w, !q) == Rational(1));
    }
}

TEST_CASE("reliable belief on the two-marginal domain") {
    auto vocab = ab();
    const WorldSet w = WorldSet::all(vocab);
    const Formula a = Formula::atom(vocab, "a");
    const Formula b = Formula::atom(vocab, "b");

    const Partition on_a = marginal(vocab, "a", 0.8);
    CHECK_THAT(reliable_belief(w, on_a, a), Catch::Matchers::WithinAbs(0.8, 1e-9));
    CHECK_THAT(reliable_belief(w, on_a, b), Catch::Matchers::WithinAbs(0.5, 1e-9));

    const Partition on_b = marginal(vocab, "b", 0.6);
    CHECK_THAT(reliable_belief(w, on_b, a), Catch::Matchers::WithinAbs(0.5, 1e-9));
    CHECK_THAT(reliable_belief(w, on_b, b), Catch::Matchers::WithinAbs(0.6, 1e-9));

    const Partition trivial = Partition::trivial(vocab);
    CHECK_THAT(reliable_belief(w, trivial, a), Catch::Matchers::WithinAbs(0.5, 1e-9));
    CHECK_THAT(reliable_belief(w, trivial, b), Catch::Matchers::WithinAbs(0.5, 1e-9));
}

TEST_CASE("invalid partitions are refused") {
    auto vocab = ab();
    const WorldSet w = WorldSet::all(vocab);
    const Formula a = Formula::atom(vocab, "a");
    const Formula b = Formula::atom(vocab, "b");
    const Formula q = a | b;

    // probabilities not summing to one
    CHECK_THROWS_AS(reliable_belief(w, Partition{{{a, 0.5}, {!a, 0.4}}}, q), DomainError);
    // overlapping cells
    CHECK_THROWS_AS(reliable_belief(w, Partition{{{a, 0.5}, {a | b, 0.5}}}, q),
                    DomainError);
    // non-covering cells
    CHECK_THROWS_AS(reliable_belief(w, Partition{{{a & b, 0.5}, {!a & !b, 0.5}}}, q),
                    DomainError);
    // empty cell
    CHECK_THROWS_AS(
        reliable_belief(w, Partition{{{a & !a, 0.2}, {Formula::verum(vocab), 0.8}}}, q),
        DomainError);
    // out-of-range probability
    CHECK_THROWS_AS(reliable_belief(w, Partition{{{a, 1.2}, {!a, -0.2}}}, q), DomainError);
}

TEST_CASE("property: reliable belief with the trivial partition equals the ratio") {
    auto vocab = Vocabulary::create({"a", "b", "c"});
    Rng rng(21);
    for (int i = 0; i < 100; ++i) {
        const WorldSet w = models(random_formula(rng, vocab, 3));
        if (w.empty()) continue;
        const Formula q = random_formula(rng, vocab, 3);
        const double via_partition = reliable_belief(w, Partition::trivial(vocab), q);
        const double via_ratio = to_double(possibility_ratio(w, q));
        CHECK_THAT(via_partition, Catch::Matchers::WithinAbs(via_ratio, 1e-12));
    }
}

TEST_CASE("property: cells recover their stated probability and beliefs are additive") {
    auto vocab = Vocabulary::create({"a", "b", "c"});
    Rng rng(31);
    int tested = 0;
    for (int i = 0; i < 400 && tested < 100; ++i) {
        const WorldSet w = models(random_formula(rng, vocab, 3));
        const Formula a = Formula::atom(vocab, "a");
        if (w.empty() || (models(a) & w).empty() || (models(!a) & w).empty()) continue;
        ++tested;
        const double p = 0.05 + 0.9 * rng.uniform();
        const Partition part = Partition{{{a, p}, {!a, 1.0 - p}}};

        CHECK_THAT(reliable_belief(w, part, a), Catch::Matchers::WithinAbs(p, 1e-9));
        CHECK_THAT(reliable_belief(w, part, !a), Catch::Matchers::WithinAbs(1.0 - p, 1e-9));

        const Formula q = random_formula(rng, vocab, 3);
        const double bq = reliable_belief(w, part, q);
        const double bnq = reliable_belief(w, part, !q);
        CHECK_THAT(bq + bnq, Catch::Matchers::WithinAbs(1.0, 1e-9));

        // monotone in the query's within-W model set
        const Formula wider = q | random_formula(rng, vocab, 3);
        CHECK(reliable_belief(w, part, wider) >= bq - 1e-12);
    }
    CHECK(tested == 100);
}

TEST_CASE("expected error reproduces the accuracy/reliability tradeoff table") {
    auto vocab = ab();
    const Formula a = Formula::atom(vocab, "a");
    const Formula b = Formula::atom(vocab, "b");
    const std::vector<std::pair<Formula, double>> truth = {{a, 0.8}, {b, 0.6}};

    auto err = [&](double ba, double bb) {
        return expected_error({{a, ba}, {b, bb}}, truth);
    };
    CHECK_THAT(err(0.8, 0.6), Catch::Matchers::WithinAbs(0.40, 1e-9));
    CHECK_THAT(err(0.8, 0.5), Catch::Matchers::WithinAbs(0.41, 1e-9));
    CHECK_THAT(err(0.5, 0.6), Catch::Matchers::WithinAbs(0.49, 1e-9));
    CHECK_THAT(err(0.5, 0.5), Catch::Matchers::WithinAbs(0.50, 1e-9));
}

TEST_CASE("expected error edge cases and validation") {
    auto vocab = ab();
    const Formula a = Formula::atom(vocab, "a");
    const Formula b = Formula::atom(vocab, "b");

    // with b = p the statement contributes p(1-p)
    CHECK_THAT(expected_error({{a, 0.3}, {b, 0.0}}, {{a, 0.3}, {b, 0.0}}),
               Catch::Matchers::WithinAbs(0.21, 1e-12));

    CHECK_THROWS_AS(expected_error({{a, 0.5}}, {{a, 0.5}, {b, 0.5}}), DomainError);
    CHECK_THROWS_AS(expected_error({{a, 0.5}}, {{b, 0.5}}), DomainError);
    CHECK_THROWS_AS(expected_error({{a, 1.5}}, {{a, 0.5}}), DomainError);
}

TEST_CASE("property: expected error is minimized statement-wise at b = p") {
    auto vocab = Vocabulary::create({"a"});
    const Formula a = Formula::atom(vocab, "a");
    Rng rng(41);
    for (int i = 0; i < 50; ++i) {
        const double p = rng.uniform();
        const double at_p = expected_error({{a, p}}, {{a, p}});
        for (int g = 0; g <= 100; ++g) {
            const double belief = g / 100.0;
            CHECK(expected_error({{a, belief}}, {{a, p}}) >= at_p - 1e-12);
        }
    }
}

TEST_CASE("laplace chain reproduces the rule of succession") {
    const auto seq = laplace_sequence(3, 0);  // four atoms total: a + 3 causes
    REQUIRE(seq.size() == 4);
    CHECK(seq[0] == Rational(1, 2));
    CHECK(seq[1] == Rational(2, 3));
    CHECK(seq[2] == Rational(3, 4));
    CHECK(seq[3] == Rational(4, 5));

    // "8 of 16" at N = 0 over four atoms
    InductionState state(3, 0);
    CHECK(state.admissible().count() == 16);
    CHECK(count_models(state.target(), state.admissible()) == 8);
}

TEST_CASE("laplace values are unchanged by free atoms") {
    const auto bare = laplace_sequence(6, 0);
    const auto padded = laplace_sequence(6, 3);
    REQUIRE(bare.size() == padded.size());
    for (std::size_t n = 0; n < bare.size(); ++n) {
        CHECK(bare[n] == padded[n]);
        CHECK(bare[n] == Rational(1 + n, 2 + n));
    }
    CHECK(padded[6] == Rational(7, 8));
}

TEST_CASE("laplace vocabulary cap is enforced") {
    CHECK_THROWS_AS(laplace_sequence(25, 0), DomainError);
    CHECK_THROWS_AS(laplace_sequence(10, 15), DomainError);
    CHECK_NOTHROW(laplace_sequence(0, 0));
}

TEST_CASE("induction state grows one rule per observation") {
    InductionState state(2, 1);
    CHECK(state.observations() == 0);
    state.observe();
    CHECK(state.observations() == 1);
    CHECK(state.chain()[0].render() == "cause1 -> a");
    state.observe();
    CHECK(state.chain()[1].render() == "cause2 -> cause1");
    CHECK_THROWS_AS(state.observe(), DomainError);
}

TEST_CASE("exact identity: fraction of size-k statement classes holding the true world") {
    // For every admissible set W with |W| = m and every true world w in W,
    // among the C(m,k) statement classes of within-W size k, exactly
    // C(m-1,k-1) contain w, so the containing fraction is k/m. Checked by
    // enumerating all 2^m subsets for every W over three atoms, m <= 8.
    auto vocab = Vocabulary::create({"a", "b", "c"});
    const std::size_t universe = vocab->world_count();
    for (std::uint32_t w_mask = 1; w_mask < (1u << universe); ++w_mask) {
        const std::size_t m = std::popcount(w_mask);
        for (std::size_t true_pos = 0; true_pos < m; ++true_pos) {
            std::vector<std::uint64_t> total(m + 1, 0), holding(m + 1, 0);
            for (std::uint32_t subset = 0; subset < (1u << m); ++subset) {
                const std::size_t k = std::popcount(subset);
                ++total[k];
                if ((subset >> true_pos) & 1u) ++holding[k];
            }
            for (std::size_t k = 0; k <= m; ++k)
                CHECK(holding[k] * m == k * total[k]);  // exact, no tolerance
        }
    }
}
