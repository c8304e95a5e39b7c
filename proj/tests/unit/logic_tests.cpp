#include <catch2/catch_amalgamated.hpp>

#include "ipw/logic.hpp"
#include "ipw/parse.hpp"
#include "support/random_formulas.hpp"
#include "support/test_rng.hpp"

using namespace ipw;
using ipw_test::oracle_eval;
using ipw_test::random_formula;
using ipw_test::Rng;

namespace {

VocabularyPtr ab() { return Vocabulary::create({"a", "b"}); }

}  // namespace

TEST_CASE("vocabulary construction enforces its invariants") {
    CHECK_THROWS_AS(Vocabulary::create({}), DomainError);
    CHECK_THROWS_AS(Vocabulary::create({"a", "a"}), DomainError);
    CHECK_THROWS_AS(Vocabulary::create({"9lives"}), DomainError);
    CHECK_THROWS_AS(Vocabulary::create({"true"}), DomainError);

    std::vector<std::string> too_many;
    for (int i = 0; i < 21; ++i) too_many.push_back("x" + std::to_string(i));
    CHECK_THROWS_AS(Vocabulary::create(too_many), DomainError);

    auto vocab = Vocabulary::create({"a", "b_2", "C"});
    CHECK(vocab->size() == 3);
    CHECK(vocab->find("b_2") == 1);
    CHECK_FALSE(vocab->find("missing").has_value());
}

TEST_CASE("parser handles precedence and associativity") {
    auto vocab = Vocabulary::create({"a", "b", "c"});
    const Formula a = Formula::atom(vocab, "a");
    const Formula b = Formula::atom(vocab, "b");
    const Formula c = Formula::atom(vocab, "c");

    CHECK(parse_formula("a -> b", vocab) == implies(a, b));
    CHECK(parse_formula("!a & b -> c", vocab) == implies(!a & b, c));
    CHECK(parse_formula("a -> b -> c", vocab) == implies(a, implies(b, c)));
    CHECK(parse_formula("a <-> b <-> c", vocab) == iff(iff(a, b), c));
    CHECK(parse_formula("a | b & c", vocab) == (a | (b & c)));
    CHECK(parse_formula("(a | b) & c", vocab) == ((a | b) & c));
    CHECK(parse_formula("!!a", vocab) == !!a);
    CHECK(parse_formula("true & !false", vocab) ==
          (Formula::verum(vocab) & !Formula::falsum(vocab)));
}

TEST_CASE("parser reports positions and unknown atoms") {
    auto vocab = ab();
    try {
        parse_formula("a &", vocab);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 3);
    }

    try {
        parse_formula("a & zebra", vocab);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("zebra"));
        CHECK(e.offset() == 4);
    }

    CHECK_THROWS_AS(parse_formula("", vocab), ParseError);
    CHECK_THROWS_AS(parse_formula("a b", vocab), ParseError);
    CHECK_THROWS_AS(parse_formula("(a", vocab), ParseError);
}

TEST_CASE("models of an implication are the satisfying assignments") {
    auto vocab = ab();
    const WorldSet w = models(parse_formula("a -> b", vocab));
    CHECK(w.count() == 3);
    // bit 0 = a, bit 1 = b
    CHECK(w.contains(0b00));
    CHECK(w.contains(0b10));
    CHECK(w.contains(0b11));
    CHECK_FALSE(w.contains(0b01));
}

TEST_CASE("models of constants") {
    auto single = Vocabulary::create({"a"});
    CHECK(models(Formula::verum(single)) == WorldSet::all(single));
    CHECK(models(parse_formula("a & !a", single)).empty());
}

TEST_CASE("count_models intersects with the given world set") {
    auto vocab = ab();
    const WorldSet w = models(parse_formula("a -> b", vocab));
    CHECK(count_models(parse_formula("b", vocab), w) == 2);
    CHECK(count_models(Formula::verum(vocab), w) == w.count());
    CHECK(count_models(parse_formula("a", vocab), w) == 1);
}

TEST_CASE("entailment over world sets") {
    auto vocab = Vocabulary::create({"a", "c"});
    const WorldSet w = models(parse_formula("c & (c -> a)", vocab));
    CHECK(entails(w, parse_formula("a", vocab)));
    CHECK(entails(WorldSet::all(vocab), Formula::verum(vocab)));
    CHECK(entails(WorldSet::none(vocab), parse_formula("a & !a", vocab)));

    auto two = ab();
    CHECK_FALSE(entails(models(parse_formula("a | b", two)),
                        parse_formula("a", two)));
}

TEST_CASE("rendering uses minimal parentheses and round-trips") {
    auto vocab = Vocabulary::create({"a", "b", "c"});
    CHECK(parse_formula("!a & b -> c", vocab).render() == "!a & b -> c");
    CHECK(parse_formula("(a -> b) -> c", vocab).render() == "(a -> b) -> c");
    CHECK(parse_formula("a -> (b -> c)", vocab).render() == "a -> b -> c");
    CHECK(parse_formula("a <-> (b <-> c)", vocab).render() == "a <-> (b <-> c)");
    CHECK(parse_formula("!(a | b)", vocab).render() == "!(a | b)");
    CHECK(parse_formula("a & (b | c)", vocab).render() == "a & (b | c)");
}

TEST_CASE("property: parse(render(f)) is structurally equal to f") {
    auto vocab = Vocabulary::create({"a", "b", "c", "d"});
    Rng rng(0xF00DULL);
    for (int i = 0; i < 500; ++i) {
        const Formula f = random_formula(rng, vocab, 4);
        CHECK(parse_formula(f.render(), vocab) == f);
    }
}

TEST_CASE("property: model sets follow boolean algebra and match brute force") {
    auto vocab = Vocabulary::create({"a", "b", "c", "d"});
    Rng rng(0xBEEFULL);
    const WorldSet full = WorldSet::all(vocab);
    for (int i = 0; i < 300; ++i) {
        const Formula f = random_formula(rng, vocab, 4);
        const Formula g = random_formula(rng, vocab, 4);
        const WorldSet mf = models(f);
        const WorldSet mg = models(g);

        CHECK(models(!f) == (full - mf));
        CHECK(models(f & g) == (mf & mg));
        CHECK(models(f | g) == (mf | mg));

        for (World w = 0; w < full.universe_size(); ++w)
            CHECK(mf.contains(w) == oracle_eval(f, w));
    }
}

TEST_CASE("property: count_models is monotone under entailment") {
    auto vocab = Vocabulary::create({"a", "b", "c"});
    Rng rng(0xCAFEULL);
    for (int i = 0; i < 200; ++i) {
        const Formula f = random_formula(rng, vocab, 3);
        const Formula g = random_formula(rng, vocab, 3);
        const WorldSet within = models(random_formula(rng, vocab, 3));
        if (models(f).subset_of(models(g)))
            CHECK(count_models(f, within) <= count_models(g, within));
    }
}

TEST_CASE("property: truth tables spanning multiple words match brute force") {
    // eight atoms = 256 worlds = four 64-bit words, so word-granular atom
    // patterns and complement masking are all exercised
    auto vocab =
        Vocabulary::create({"a", "b", "c", "d", "e", "f", "g", "h"});
    Rng rng(0x8A71);
    const WorldSet full = WorldSet::all(vocab);
    REQUIRE(full.count() == 256);
    for (int i = 0; i < 100; ++i) {
        const Formula f = random_formula(rng, vocab, 4);
        const WorldSet mf = models(f);
        for (World w = 0; w < 256; ++w)
            if (mf.contains(w) != oracle_eval(f, w)) {
                CAPTURE(f.render(), w);
                FAIL("model set disagrees with the brute-force evaluator");
            }
        CHECK(models(!f) == (full - mf));
        CHECK((mf & ~mf).empty());
    }
    SUCCEED();
}

TEST_CASE("property: the parser never crashes and accepts only round-trippable text") {
    auto vocab = Vocabulary::create({"a", "b"});
    const char alphabet[] = "ab()!&|<-> teru_9";
    Rng rng(0xF422);
    for (int i = 0; i < 2000; ++i) {
        std::string text;
        const std::size_t len = rng.below(24);
        for (std::size_t k = 0; k < len; ++k)
            text += alphabet[rng.below(sizeof(alphabet) - 1)];
        try {
            const Formula f = parse_formula(text, vocab);
            CHECK(parse_formula(f.render(), vocab) == f);
        } catch (const ParseError&) {
            // rejected input; fine
        }
    }
    SUCCEED();
}

TEST_CASE("world sets reject mixed vocabularies") {
    auto v1 = Vocabulary::create({"a", "b"});
    auto v2 = Vocabulary::create({"a", "c"});
    CHECK_THROWS_AS(WorldSet::all(v1) & WorldSet::all(v2), DomainError);
    CHECK_THROWS_AS(Formula::atom(v1, "a") & Formula::atom(v2, "c"), DomainError);
}

TEST_CASE("world indices are bounded by the universe") {
    auto vocab = Vocabulary::create({"a", "b"});
    const WorldSet all = WorldSet::all(vocab);
    CHECK(all.contains(3));
    CHECK_THROWS_AS(all.contains(4), DomainError);
    WorldSet some = WorldSet::none(vocab);
    some.set(2);
    CHECK(some.contains(2));
    CHECK_THROWS_AS(some.set(99), DomainError);
}

TEST_CASE("formula rebind maps atoms by name") {
    auto small = ab();
    auto big = Vocabulary::create({"x", "a", "b"});
    const Formula f = parse_formula("a -> b", small);
    const Formula g = f.rebind(big);
    CHECK(g.render() == "a -> b");
    CHECK(models(g).count() == 6);  // 3 satisfying pairs times free atom x
}
