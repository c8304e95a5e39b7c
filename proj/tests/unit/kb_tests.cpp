#include <catch2/catch_amalgamated.hpp>

#include "ipw/kb.hpp"

using namespace ipw;

TEST_CASE("a full knowledge base parses into its sections") {
    const char* text = R"(# exercise every declaration kind
atoms a b c d

axiom d -> !b   # axioms are certain
axiom c -> a
fact c
default a : b / b
default c : d / d
prob a = 0.8
prob b given a in [0.5, 0.75]
partition { a : 0.8 ; !a : 0.2 }
expert e1 { a : 0.8 ; b : 0.6 }
expert e2 { a : 0.6 ; b : 0.8 }
)";
    const KnowledgeBase kb = parse_kb(text);
    CHECK(kb.vocab->size() == 4);
    CHECK(kb.axioms.size() == 2);
    CHECK(kb.facts.size() == 1);
    CHECK(kb.defaults.size() == 2);
    REQUIRE(kb.constraints.size() == 2);
    CHECK(kb.constraints[0].target().render() == "a");
    CHECK(kb.constraints[0].lo() == Rational(4, 5));
    CHECK(kb.constraints[0].hi() == Rational(4, 5));
    CHECK(kb.constraints[1].given().render() == "a");
    CHECK(kb.constraints[1].lo() == Rational(1, 2));
    CHECK(kb.constraints[1].hi() == Rational(3, 4));
    REQUIRE(kb.partition.has_value());
    CHECK(kb.partition->cells.size() == 2);
    REQUIRE(kb.experts.size() == 2);
    CHECK(kb.experts[0].id == "e1");
    CHECK(kb.experts[1].judgments[1].second == Rational(4, 5));
}

TEST_CASE("declarations may precede the atoms line") {
    const KnowledgeBase kb = parse_kb("axiom a -> b\natoms a b\n");
    CHECK(kb.axioms.size() == 1);
    CHECK(models(kb.axioms[0]).count() == 3);
}

TEST_CASE("an empty file is missing its atoms declaration") {
    CHECK_THROWS_WITH(parse_kb(""),
                      Catch::Matchers::ContainsSubstring("missing atoms declaration"));
    CHECK_THROWS_WITH(parse_kb("# only a comment\n"),
                      Catch::Matchers::ContainsSubstring("missing atoms declaration"));
}

TEST_CASE("kb diagnostics carry line and column") {
    try {
        parse_kb("atoms a b\nprob a = 1.2\n");
        FAIL("expected a range error");
    } catch (const KbError& e) {
        CHECK(e.line() == 2);
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("outside [0,1]"));
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("line 2"));
    }

    try {
        parse_kb("atoms a b\naxiom a -> zebra\n");
        FAIL("expected an unknown-atom error");
    } catch (const KbError& e) {
        CHECK(e.line() == 2);
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("zebra"));
    }

    try {
        parse_kb("atoms a b\n\naxiom a &\n");
        FAIL("expected a syntax error");
    } catch (const KbError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("kb structural errors") {
    // duplicate atoms declarations
    CHECK_THROWS_WITH(parse_kb("atoms a\natoms b\n"),
                      Catch::Matchers::ContainsSubstring("duplicate atoms"));
    // duplicate partitions
    CHECK_THROWS_WITH(
        parse_kb("atoms a\npartition { a : 0.5 ; !a : 0.5 }\n"
                 "partition { a : 0.5 ; !a : 0.5 }\n"),
        Catch::Matchers::ContainsSubstring("duplicate partition"));
    // unknown keyword
    CHECK_THROWS_WITH(parse_kb("atoms a\nassume a\n"),
                      Catch::Matchers::ContainsSubstring("unknown declaration 'assume'"));
    // reserved keyword as atom
    CHECK_THROWS_WITH(parse_kb("atoms a given\n"),
                      Catch::Matchers::ContainsSubstring("'given' is reserved"));
    // non-normal default
    CHECK_THROWS_WITH(parse_kb("atoms a b c\ndefault a : b / c\n"),
                      Catch::Matchers::ContainsSubstring("not normal"));
    // interval out of order
    CHECK_THROWS_WITH(parse_kb("atoms a\nprob a in [0.7, 0.3]\n"),
                      Catch::Matchers::ContainsSubstring("out of order"));
    // partition probabilities must sum to one
    CHECK_THROWS_WITH(parse_kb("atoms a\npartition { a : 0.5 ; !a : 0.4 }\n"),
                      Catch::Matchers::ContainsSubstring("sum"));
    // trailing junk
    CHECK_THROWS_AS(parse_kb("atoms a\naxiom a extra\n"), KbError);
    // malformed block
    CHECK_THROWS_AS(parse_kb("atoms a\nexpert e { a : 0.5\n"), KbError);
    CHECK_THROWS_AS(parse_kb("atoms a\npartition { a 0.5 }\n"), KbError);
}

TEST_CASE("probabilities parse as exact rationals") {
    const KnowledgeBase kb = parse_kb("atoms a\nprob a = 0.125\n");
    CHECK(kb.constraints[0].lo() == Rational(1, 8));
}

TEST_CASE("load_kb reads files and reports missing ones") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "ipw_kb_test.kb";
    {
        std::ofstream out(path);
        out << "atoms a b\naxiom a -> b\n";
    }
    const KnowledgeBase kb = load_kb(path);
    CHECK(kb.axioms.size() == 1);
    fs::remove(path);

    CHECK_THROWS_AS(load_kb(fs::temp_directory_path() / "ipw_no_such_file.kb"), Error);
}
