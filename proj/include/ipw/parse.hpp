#pragma once

// Recursive-descent parser for the shared formula grammar:
//
//   formula := iff
//   iff     := imp ("<->" imp)*          left-associative
//   imp     := or ("->" imp)?            right-associative
//   or      := and ("|" and)*
//   and     := unary ("&" unary)*
//   unary   := "!" unary | "(" formula ")" | "true" | "false" | IDENT
//
// parse_formula consumes the whole input; parse_formula_prefix stops at the
// first token that cannot extend the formula and reports how much it read
// (the knowledge-base loader uses this to find trailing keywords).

#include <cctype>
#include <string>
#include <string_view>
#include <utility>

#include "ipw/errors.hpp"
#include "ipw/logic.hpp"

namespace ipw {

namespace detail {

class FormulaParser {
public:
    FormulaParser(std::string_view text, VocabularyPtr vocab)
        : text_(text), vocab_(std::move(vocab)) {
        if (!vocab_) throw DomainError("null vocabulary");
    }

    std::pair<Formula, std::size_t> parse_prefix() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("empty formula", pos_);
        Formula f = parse_iff();
        return {f, pos_};
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool try_consume(std::string_view token) {
        skip_ws();
        if (text_.substr(pos_).substr(0, token.size()) != token) return false;
        pos_ += token.size();
        return true;
    }

    Formula parse_iff() {
        Formula f = parse_implies();
        while (try_consume("<->")) f = iff(f, parse_implies());
        return f;
    }

    Formula parse_implies() {
        Formula f = parse_or();
        if (try_consume("->")) return implies(f, parse_implies());
        return f;
    }

    Formula parse_or() {
        Formula f = parse_and();
        while (true) {
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '|') {
                ++pos_;
                f = f | parse_and();
            } else {
                return f;
            }
        }
    }

    Formula parse_and() {
        Formula f = parse_unary();
        while (true) {
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '&') {
                ++pos_;
                f = f & parse_unary();
            } else {
                return f;
            }
        }
    }

    Formula parse_unary() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("expected operand", pos_);
        const char c = text_[pos_];
        if (c == '!') {
            ++pos_;
            return !parse_unary();
        }
        if (c == '(') {
            ++pos_;
            Formula f = parse_iff();
            skip_ws();
            if (pos_ >= text_.size() || text_[pos_] != ')')
                throw ParseError("expected ')'", pos_);
            ++pos_;
            return f;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                    text_[pos_] == '_'))
                ++pos_;
            const std::string_view word = text_.substr(start, pos_ - start);
            if (word == "true") return Formula::verum(vocab_);
            if (word == "false") return Formula::falsum(vocab_);
            auto idx = vocab_->find(word);
            if (!idx)
                throw ParseError("unknown atom '" + std::string(word) + "'", start);
            return Formula::atom(vocab_, *idx);
        }
        throw ParseError("expected operand", pos_);
    }

    std::string_view text_;
    VocabularyPtr vocab_;
    std::size_t pos_ = 0;
};

}  // namespace detail

// Parses a leading formula and returns it with the number of bytes consumed.
inline std::pair<Formula, std::size_t> parse_formula_prefix(std::string_view text,
                                                            VocabularyPtr vocab) {
    detail::FormulaParser parser(text, std::move(vocab));
    return parser.parse_prefix();
}

// Parses the entire text as one formula.
inline Formula parse_formula(std::string_view text, VocabularyPtr vocab) {
    auto [formula, consumed] = parse_formula_prefix(text, std::move(vocab));
    std::size_t rest = consumed;
    while (rest < text.size() &&
           std::isspace(static_cast<unsigned char>(text[rest])))
        ++rest;
    if (rest != text.size()) throw ParseError("unexpected trailing input", rest);
    return formula;
}

}  // namespace ipw
