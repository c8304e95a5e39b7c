#pragma once

// Line-oriented knowledge-base files. `#` starts a comment; declarations may
// appear in any order, but exactly one `atoms` line must be present:
//
//   atoms IDENT+
//   axiom <formula>
//   fact <formula>
//   default <formula> : <formula> / <formula>
//   prob <formula> [given <formula>] ( = NUM | in [NUM, NUM] )
//   partition { <formula> : NUM (; <formula> : NUM)* }
//   expert IDENT { <formula> : NUM (; <formula> : NUM)* }
//
// `given` is a keyword of the prob declaration and cannot be used as an atom
// name. Every diagnostic carries a 1-based line and column.

#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ipw/credal.hpp"
#include "ipw/defaults.hpp"
#include "ipw/errors.hpp"
#include "ipw/logic.hpp"
#include "ipw/parse.hpp"
#include "ipw/policy.hpp"
#include "ipw/rational.hpp"

namespace ipw {

struct KnowledgeBase {
    VocabularyPtr vocab;
    std::vector<Formula> axioms;
    std::vector<Formula> facts;
    std::optional<Partition> partition;
    std::vector<CredalConstraint> constraints;
    std::vector<DefaultRule> defaults;
    std::vector<ExpertAssessment> experts;
};

namespace detail {

// Cursor over one logical line with column-accurate diagnostics.
class KbCursor {
public:
    KbCursor(std::string_view text, int line) : text_(text), line_(line) {}

    [[noreturn]] void fail(const std::string& message) const {
        throw KbError(message, line_, static_cast<int>(pos_) + 1);
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }

    bool try_char(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const std::string& what) {
        if (!try_char(c)) fail("expected '" + std::string(1, c) + "' " + what);
    }

    std::string word() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')
                ++pos_;
            else
                break;
        }
        if (start == pos_) fail("expected a word");
        return std::string(text_.substr(start, pos_ - start));
    }

    bool peek_word(std::string_view expected) {
        skip_ws();
        if (text_.substr(pos_).substr(0, expected.size()) != expected) return false;
        const std::size_t end = pos_ + expected.size();
        if (end < text_.size()) {
            const char c = text_[end];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') return false;
        }
        return true;
    }

    Rational number() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '.'))
            ++pos_;
        if (start == pos_) fail("expected a number");
        try {
            return rational_from_decimal(text_.substr(start, pos_ - start));
        } catch (const ParseError&) {
            pos_ = start;
            fail("malformed number");
        }
    }

    Rational probability() {
        const std::size_t start = pos_;
        const Rational value = number();
        if (value < 0 || value > 1) {
            pos_ = start;
            fail("probability " + to_fraction_string(value) + " is outside [0,1]");
        }
        return value;
    }

    Formula formula(const VocabularyPtr& vocab) {
        skip_ws();
        const std::size_t start = pos_;
        try {
            auto [parsed, consumed] = parse_formula_prefix(text_.substr(start), vocab);
            pos_ = start + consumed;
            return parsed;
        } catch (const ParseError& e) {
            throw KbError(e.what(), line_, static_cast<int>(start + e.offset()) + 1);
        }
    }

    void expect_end() {
        if (!at_end()) fail("unexpected trailing input");
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_;
};

inline std::vector<std::pair<Formula, Rational>> parse_weighted_block(
    KbCursor& cursor, const VocabularyPtr& vocab) {
    cursor.expect('{', "to open the block");
    std::vector<std::pair<Formula, Rational>> items;
    while (true) {
        Formula statement = cursor.formula(vocab);
        cursor.expect(':', "between statement and probability");
        Rational p = cursor.probability();
        items.emplace_back(std::move(statement), std::move(p));
        if (cursor.try_char(';')) continue;
        cursor.expect('}', "to close the block");
        break;
    }
    return items;
}

}  // namespace detail

// Parses knowledge-base text. `name` is used only in I/O-level messages.
inline KnowledgeBase parse_kb(std::string_view text) {
    // Split into lines, dropping comments.
    std::vector<std::string_view> lines;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        std::size_t end = text.find('\n', begin);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(begin, end - begin);
        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        lines.push_back(line);
        if (end == text.size()) break;
        begin = end + 1;
    }

    auto keyword_of = [](std::string_view line) -> std::string_view {
        std::size_t i = 0;
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) ||
                                   line[j] == '_'))
            ++j;
        return line.substr(i, j - i);
    };

    // First pass: the single atoms declaration fixes the vocabulary.
    VocabularyPtr vocab;
    int atoms_line = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (keyword_of(lines[i]) != "atoms") continue;
        const int line_no = static_cast<int>(i) + 1;
        if (vocab) throw KbError("duplicate atoms declaration", line_no, 1);
        detail::KbCursor cursor(lines[i], line_no);
        cursor.word();  // consume 'atoms'
        std::vector<std::string> names;
        while (!cursor.at_end()) names.push_back(cursor.word());
        for (const auto& name : names)
            if (name == "given")
                throw KbError("'given' is reserved by the prob declaration", line_no, 1);
        try {
            vocab = Vocabulary::create(std::move(names));
        } catch (const DomainError& e) {
            throw KbError(e.what(), line_no, 1);
        }
        atoms_line = line_no;
    }
    if (!vocab) throw KbError("missing atoms declaration", 1, 1);

    KnowledgeBase kb;
    kb.vocab = vocab;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const int line_no = static_cast<int>(i) + 1;
        if (line_no == atoms_line) continue;
        detail::KbCursor cursor(lines[i], line_no);
        if (cursor.at_end()) continue;
        const std::string keyword = cursor.word();

        if (keyword == "axiom") {
            kb.axioms.push_back(cursor.formula(vocab));
            cursor.expect_end();
        } else if (keyword == "fact") {
            kb.facts.push_back(cursor.formula(vocab));
            cursor.expect_end();
        } else if (keyword == "default") {
            Formula prerequisite = cursor.formula(vocab);
            cursor.expect(':', "between prerequisite and justification");
            Formula justification = cursor.formula(vocab);
            cursor.expect('/', "between justification and consequent");
            Formula consequent = cursor.formula(vocab);
            cursor.expect_end();
            try {
                kb.defaults.emplace_back(std::move(prerequisite), std::move(justification),
                                         std::move(consequent));
            } catch (const DomainError& e) {
                throw KbError(e.what(), line_no, 1);
            }
        } else if (keyword == "prob") {
            Formula target = cursor.formula(vocab);
            Formula given = Formula::verum(vocab);
            if (cursor.peek_word("given")) {
                cursor.word();
                given = cursor.formula(vocab);
            }
            if (cursor.try_char('=')) {
                const Rational p = cursor.probability();
                kb.constraints.push_back(
                    CredalConstraint::conditional(target, given, p, p));
            } else if (cursor.peek_word("in")) {
                cursor.word();
                cursor.expect('[', "to open the interval");
                const Rational lo = cursor.probability();
                cursor.expect(',', "between interval bounds");
                const Rational hi = cursor.probability();
                cursor.expect(']', "to close the interval");
                if (lo > hi) cursor.fail("interval bounds are out of order");
                kb.constraints.push_back(
                    CredalConstraint::conditional(target, given, lo, hi));
            } else {
                cursor.fail("expected '=' or 'in' after the statement");
            }
            cursor.expect_end();
        } else if (keyword == "partition") {
            if (kb.partition) cursor.fail("duplicate partition declaration");
            auto items = detail::parse_weighted_block(cursor, vocab);
            cursor.expect_end();
            Partition partition;
            double total = 0.0;
            for (auto& [statement, p] : items) {
                partition.cells.push_back(PartitionCell{statement, to_double(p)});
                total += to_double(p);
            }
            if (std::fabs(total - 1.0) > kProbabilityTolerance)
                cursor.fail("partition probabilities sum to " + std::to_string(total) +
                            ", not 1");
            kb.partition = std::move(partition);
        } else if (keyword == "expert") {
            std::string id = cursor.word();
            auto items = detail::parse_weighted_block(cursor, vocab);
            cursor.expect_end();
            kb.experts.push_back(ExpertAssessment{std::move(id), std::move(items)});
        } else {
            detail::KbCursor fresh(lines[i], line_no);
            fresh.fail("unknown declaration '" + keyword + "'");
        }
    }
    return kb;
}

inline KnowledgeBase load_kb(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open knowledge base '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_kb(buffer.str());
}

}  // namespace ipw
