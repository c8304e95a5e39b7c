#pragma once

// Propositional formulas over small, fixed vocabularies plus exhaustive
// possible-worlds semantics.
//
//   Vocabulary — ordered atom names; declaration order fixes world encoding.
//   Formula    — immutable AST (shared structure), structural equality,
//                canonical minimal-parenthesis rendering.
//   World      — truth assignment encoded as an index in [0, 2^n);
//                bit i of the index is the value of atom i.
//   WorldSet   — dense bit vector over all 2^n worlds of one vocabulary.
//
// The vocabulary is capped at 20 atoms so every operation can enumerate the
// full truth table exactly.

#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ipw/errors.hpp"

namespace ipw {

using World = std::uint32_t;

namespace detail {

inline bool is_identifier(std::string_view name) {
    if (name.empty()) return false;
    auto head = [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    };
    auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
    if (!head(name[0])) return false;
    for (std::size_t i = 1; i < name.size(); ++i)
        if (!tail(name[i])) return false;
    return true;
}

}  // namespace detail

class Vocabulary {
public:
    static constexpr std::size_t kMaxAtoms = 20;

    explicit Vocabulary(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
        if (atoms_.empty()) throw DomainError("vocabulary must contain at least one atom");
        if (atoms_.size() > kMaxAtoms)
            throw DomainError("vocabulary exceeds the " + std::to_string(kMaxAtoms) +
                              "-atom enumeration cap");
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (!detail::is_identifier(atoms_[i]))
                throw DomainError("invalid atom name '" + atoms_[i] + "'");
            if (atoms_[i] == "true" || atoms_[i] == "false")
                throw DomainError("atom name '" + atoms_[i] + "' is reserved");
            for (std::size_t j = 0; j < i; ++j)
                if (atoms_[i] == atoms_[j])
                    throw DomainError("duplicate atom name '" + atoms_[i] + "'");
        }
    }

    static std::shared_ptr<const Vocabulary> create(std::vector<std::string> atoms) {
        return std::make_shared<const Vocabulary>(std::move(atoms));
    }

    std::size_t size() const noexcept { return atoms_.size(); }
    const std::string& name(std::size_t i) const { return atoms_.at(i); }
    const std::vector<std::string>& atoms() const noexcept { return atoms_; }

    std::optional<std::size_t> find(std::string_view name) const {
        for (std::size_t i = 0; i < atoms_.size(); ++i)
            if (atoms_[i] == name) return i;
        return std::nullopt;
    }

    std::size_t world_count() const noexcept { return std::size_t{1} << atoms_.size(); }

    bool operator==(const Vocabulary& other) const { return atoms_ == other.atoms_; }
    bool operator!=(const Vocabulary& other) const { return !(*this == other); }

private:
    std::vector<std::string> atoms_;
};

using VocabularyPtr = std::shared_ptr<const Vocabulary>;

namespace detail {

inline void require_same_vocab(const VocabularyPtr& a, const VocabularyPtr& b) {
    if (a == b) return;
    if (!a || !b || *a != *b)
        throw DomainError("operands belong to different vocabularies");
}

}  // namespace detail

class Formula {
public:
    enum class Kind : std::uint8_t { True, False, Atom, Not, And, Or, Implies, Iff };

    static Formula verum(VocabularyPtr vocab) { return Formula(Kind::True, std::move(vocab)); }
    static Formula falsum(VocabularyPtr vocab) { return Formula(Kind::False, std::move(vocab)); }

    static Formula atom(VocabularyPtr vocab, std::size_t index) {
        if (!vocab || index >= vocab->size())
            throw DomainError("atom index out of range");
        return Formula(make_node(Kind::Atom, index, nullptr, nullptr), std::move(vocab));
    }

    static Formula atom(const VocabularyPtr& vocab, std::string_view name) {
        if (!vocab) throw DomainError("null vocabulary");
        auto idx = vocab->find(name);
        if (!idx) throw DomainError("unknown atom '" + std::string(name) + "'");
        return atom(vocab, *idx);
    }

    Kind kind() const noexcept { return node_->kind; }
    std::size_t atom_index() const { return node_->atom; }
    const VocabularyPtr& vocab() const noexcept { return vocab_; }

    // Child accessors; Not stores its operand on the left.
    Formula lhs() const { return Formula(node_->left, vocab_); }
    Formula rhs() const { return Formula(node_->right, vocab_); }

    bool evaluate(World w) const { return eval_node(node_.get(), w); }

    std::string render() const {
        std::string out;
        render_node(node_.get(), 1, out);
        return out;
    }

    bool operator==(const Formula& other) const {
        if (vocab_ != other.vocab_ && *vocab_ != *other.vocab_) return false;
        return structurally_equal(node_.get(), other.node_.get());
    }
    bool operator!=(const Formula& other) const { return !(*this == other); }

    // Rebuilds the formula over another vocabulary, resolving atoms by name.
    Formula rebind(const VocabularyPtr& target) const;

    friend Formula operator!(const Formula& f) {
        return Formula::unary(Kind::Not, f);
    }
    friend Formula operator&(const Formula& a, const Formula& b) {
        return Formula::binary(Kind::And, a, b);
    }
    friend Formula operator|(const Formula& a, const Formula& b) {
        return Formula::binary(Kind::Or, a, b);
    }
    friend Formula implies(const Formula& a, const Formula& b) {
        return Formula::binary(Kind::Implies, a, b);
    }
    friend Formula iff(const Formula& a, const Formula& b) {
        return Formula::binary(Kind::Iff, a, b);
    }

private:
    struct Node {
        Kind kind;
        std::size_t atom = 0;
        std::shared_ptr<const Node> left, right;
    };
    using NodePtr = std::shared_ptr<const Node>;

    static NodePtr make_node(Kind kind, std::size_t atom, NodePtr left, NodePtr right) {
        return std::make_shared<const Node>(
            Node{kind, atom, std::move(left), std::move(right)});
    }

    Formula(Kind kind, VocabularyPtr vocab)
        : node_(make_node(kind, 0, nullptr, nullptr)), vocab_(std::move(vocab)) {
        if (!vocab_) throw DomainError("null vocabulary");
    }

    Formula(NodePtr node, VocabularyPtr vocab)
        : node_(std::move(node)), vocab_(std::move(vocab)) {
        if (!node_) throw DomainError("formula has no such child");
        if (!vocab_) throw DomainError("null vocabulary");
    }

    static Formula unary(Kind kind, const Formula& a) {
        return Formula(make_node(kind, 0, a.node_, nullptr), a.vocab_);
    }

    static Formula binary(Kind kind, const Formula& a, const Formula& b) {
        detail::require_same_vocab(a.vocab_, b.vocab_);
        return Formula(make_node(kind, 0, a.node_, b.node_), a.vocab_);
    }

    static bool eval_node(const Node* n, World w) {
        switch (n->kind) {
            case Kind::True: return true;
            case Kind::False: return false;
            case Kind::Atom: return (w >> n->atom) & 1u;
            case Kind::Not: return !eval_node(n->left.get(), w);
            case Kind::And: return eval_node(n->left.get(), w) && eval_node(n->right.get(), w);
            case Kind::Or: return eval_node(n->left.get(), w) || eval_node(n->right.get(), w);
            case Kind::Implies:
                return !eval_node(n->left.get(), w) || eval_node(n->right.get(), w);
            case Kind::Iff:
                return eval_node(n->left.get(), w) == eval_node(n->right.get(), w);
        }
        return false;
    }

    static bool structurally_equal(const Node* a, const Node* b) {
        if (a == b) return true;
        if (a->kind != b->kind) return false;
        switch (a->kind) {
            case Kind::True:
            case Kind::False: return true;
            case Kind::Atom: return a->atom == b->atom;
            case Kind::Not: return structurally_equal(a->left.get(), b->left.get());
            default:
                return structurally_equal(a->left.get(), b->left.get()) &&
                       structurally_equal(a->right.get(), b->right.get());
        }
    }

    // Precedence: <-> 1, -> 2, | 3, & 4, ! 5, atoms/constants 6. A child is
    // parenthesized when its precedence is below what its context requires.
    static int precedence(Kind k) {
        switch (k) {
            case Kind::Iff: return 1;
            case Kind::Implies: return 2;
            case Kind::Or: return 3;
            case Kind::And: return 4;
            case Kind::Not: return 5;
            default: return 6;
        }
    }

    void render_node(const Node* n, int required, std::string& out) const {
        const int prec = precedence(n->kind);
        const bool parens = prec < required;
        if (parens) out += '(';
        switch (n->kind) {
            case Kind::True: out += "true"; break;
            case Kind::False: out += "false"; break;
            case Kind::Atom: out += vocab_->name(n->atom); break;
            case Kind::Not:
                out += '!';
                render_node(n->left.get(), 5, out);
                break;
            case Kind::And:
            case Kind::Or:
            case Kind::Iff: {
                // Left-associative: the left child may repeat the operator.
                const char* op = n->kind == Kind::And ? " & "
                               : n->kind == Kind::Or ? " | "
                                                     : " <-> ";
                render_node(n->left.get(), prec, out);
                out += op;
                render_node(n->right.get(), prec + 1, out);
                break;
            }
            case Kind::Implies:
                render_node(n->left.get(), 3, out);
                out += " -> ";
                render_node(n->right.get(), 2, out);
                break;
        }
        if (parens) out += ')';
    }

    NodePtr node_;
    VocabularyPtr vocab_;
};

inline Formula Formula::rebind(const VocabularyPtr& target) const {
    switch (kind()) {
        case Kind::True: return verum(target);
        case Kind::False: return falsum(target);
        case Kind::Atom: return atom(target, vocab_->name(atom_index()));
        case Kind::Not: return !lhs().rebind(target);
        case Kind::And: return lhs().rebind(target) & rhs().rebind(target);
        case Kind::Or: return lhs().rebind(target) | rhs().rebind(target);
        case Kind::Implies: return implies(lhs().rebind(target), rhs().rebind(target));
        case Kind::Iff: return iff(lhs().rebind(target), rhs().rebind(target));
    }
    throw DomainError("corrupt formula node");
}

class WorldSet {
public:
    static WorldSet none(VocabularyPtr vocab) { return WorldSet(std::move(vocab)); }

    static WorldSet all(VocabularyPtr vocab) {
        WorldSet s(std::move(vocab));
        for (auto& word : s.bits_) word = ~std::uint64_t{0};
        s.mask_tail();
        return s;
    }

    const VocabularyPtr& vocab() const noexcept { return vocab_; }
    std::size_t universe_size() const noexcept { return vocab_->world_count(); }

    std::size_t count() const noexcept {
        std::size_t total = 0;
        for (auto word : bits_) total += std::popcount(word);
        return total;
    }

    bool empty() const noexcept {
        for (auto word : bits_)
            if (word) return false;
        return true;
    }

    bool contains(World w) const {
        check_index(w);
        return (bits_[w >> 6] >> (w & 63u)) & 1u;
    }

    void set(World w) {
        check_index(w);
        bits_[w >> 6] |= std::uint64_t{1} << (w & 63u);
    }
    void reset(World w) {
        check_index(w);
        bits_[w >> 6] &= ~(std::uint64_t{1} << (w & 63u));
    }

    WorldSet operator&(const WorldSet& other) const {
        return combine(other, [](std::uint64_t a, std::uint64_t b) { return a & b; });
    }
    WorldSet operator|(const WorldSet& other) const {
        return combine(other, [](std::uint64_t a, std::uint64_t b) { return a | b; });
    }
    WorldSet operator-(const WorldSet& other) const {
        return combine(other, [](std::uint64_t a, std::uint64_t b) { return a & ~b; });
    }
    WorldSet operator~() const {
        WorldSet out(vocab_);
        for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = ~bits_[i];
        out.mask_tail();
        return out;
    }

    bool operator==(const WorldSet& other) const {
        detail::require_same_vocab(vocab_, other.vocab_);
        return bits_ == other.bits_;
    }
    bool operator!=(const WorldSet& other) const { return !(*this == other); }

    bool subset_of(const WorldSet& other) const {
        detail::require_same_vocab(vocab_, other.vocab_);
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i] & ~other.bits_[i]) return false;
        return true;
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t i = 0; i < bits_.size(); ++i) {
            std::uint64_t word = bits_[i];
            while (word) {
                const int bit = std::countr_zero(word);
                fn(static_cast<World>(i * 64 + bit));
                word &= word - 1;
            }
        }
    }

    std::vector<World> members() const {
        std::vector<World> out;
        out.reserve(count());
        for_each([&](World w) { out.push_back(w); });
        return out;
    }

    // Direct word access for the truth-table builder.
    std::vector<std::uint64_t>& words() noexcept { return bits_; }
    const std::vector<std::uint64_t>& words() const noexcept { return bits_; }
    void mask_tail() {
        const std::size_t n = universe_size();
        if (n < 64) bits_.back() &= (std::uint64_t{1} << n) - 1;
    }

private:
    explicit WorldSet(VocabularyPtr vocab) : vocab_(std::move(vocab)) {
        if (!vocab_) throw DomainError("null vocabulary");
        bits_.assign((universe_size() + 63) / 64, 0);
    }

    void check_index(World w) const {
        if (w >= universe_size())
            throw DomainError("world index " + std::to_string(w) +
                              " exceeds the universe of this vocabulary");
    }

    template <typename Op>
    WorldSet combine(const WorldSet& other, Op op) const {
        detail::require_same_vocab(vocab_, other.vocab_);
        WorldSet out(vocab_);
        for (std::size_t i = 0; i < bits_.size(); ++i)
            out.bits_[i] = op(bits_[i], other.bits_[i]);
        return out;
    }

    VocabularyPtr vocab_;
    std::vector<std::uint64_t> bits_;
};

namespace detail {

// Truth table of atom i, one 64-world word at a time. For i < 6 the pattern
// repeats within a word; beyond that, entire words are constant.
inline std::uint64_t atom_word(std::size_t atom, std::size_t word_index) {
    static constexpr std::uint64_t kPattern[6] = {
        0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
        0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
    };
    if (atom < 6) return kPattern[atom];
    return (word_index >> (atom - 6)) & 1u ? ~std::uint64_t{0} : 0;
}

inline void build_table(const Formula& f, std::vector<std::uint64_t>& out,
                        std::size_t num_words) {
    using Kind = Formula::Kind;
    switch (f.kind()) {
        case Kind::True:
            out.assign(num_words, ~std::uint64_t{0});
            return;
        case Kind::False:
            out.assign(num_words, 0);
            return;
        case Kind::Atom:
            out.resize(num_words);
            for (std::size_t i = 0; i < num_words; ++i)
                out[i] = atom_word(f.atom_index(), i);
            return;
        case Kind::Not: {
            build_table(f.lhs(), out, num_words);
            for (auto& word : out) word = ~word;
            return;
        }
        default: {
            std::vector<std::uint64_t> right;
            build_table(f.lhs(), out, num_words);
            build_table(f.rhs(), right, num_words);
            switch (f.kind()) {
                case Kind::And:
                    for (std::size_t i = 0; i < num_words; ++i) out[i] &= right[i];
                    return;
                case Kind::Or:
                    for (std::size_t i = 0; i < num_words; ++i) out[i] |= right[i];
                    return;
                case Kind::Implies:
                    for (std::size_t i = 0; i < num_words; ++i) out[i] = ~out[i] | right[i];
                    return;
                case Kind::Iff:
                    for (std::size_t i = 0; i < num_words; ++i) out[i] = ~(out[i] ^ right[i]);
                    return;
                default: throw DomainError("corrupt formula node");
            }
        }
    }
}

}  // namespace detail

// Exactly the worlds satisfying f, by composing per-subformula truth tables.
inline WorldSet models(const Formula& f) {
    WorldSet out = WorldSet::none(f.vocab());
    detail::build_table(f, out.words(), out.words().size());
    out.mask_tail();
    return out;
}

inline std::size_t count_models(const Formula& f, const WorldSet& within) {
    detail::require_same_vocab(f.vocab(), within.vocab());
    return (models(f) & within).count();
}

// True iff every world of `within` satisfies f; vacuously true when empty.
inline bool entails(const WorldSet& within, const Formula& f) {
    detail::require_same_vocab(f.vocab(), within.vocab());
    return within.subset_of(models(f));
}

// Conjunction of a formula list; empty list is verum.
inline Formula conjunction(const VocabularyPtr& vocab, const std::vector<Formula>& parts) {
    if (parts.empty()) return Formula::verum(vocab);
    Formula acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = acc & parts[i];
    return acc;
}

}  // namespace ipw
