#pragma once

// Dense two-phase simplex over exact rationals.
//
// Solves min/max c.x subject to rows of the form a.x (<=|=|>=) b with all
// variables nonnegative. Bland's rule is used for both the entering and the
// leaving choice, so the method terminates without any perturbation; with
// rational pivoting every reported value is exact.
//
// Sized for this project's probabilistic-satisfiability systems (at most a
// few thousand columns, dozens of rows). Not a general-purpose LP code.

#include <cstddef>
#include <vector>

#include "ipw/errors.hpp"
#include "ipw/rational.hpp"

namespace ipw {

enum class Relation { LessEq, GreaterEq, Equal };

struct LinearConstraint {
    std::vector<Rational> coeffs;
    Relation relation = Relation::LessEq;
    Rational rhs = 0;
};

struct LinearProgram {
    std::size_t num_vars = 0;
    std::vector<LinearConstraint> rows;
    std::vector<Rational> objective;
    bool maximize = true;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Rational objective_value = 0;
    std::vector<Rational> point;  // structural variables only
};

namespace detail {

class SimplexTableau {
public:
    explicit SimplexTableau(const LinearProgram& lp) : n_(lp.num_vars) {
        const std::size_t m = lp.rows.size();
        // Count extra columns.
        std::size_t slacks = 0, artificials = 0;
        for (const auto& row : lp.rows) {
            if (row.coeffs.size() != n_)
                throw DomainError("constraint arity does not match variable count");
            const bool flipped = row.rhs < 0;
            Relation rel = row.relation;
            if (flipped && rel != Relation::Equal)
                rel = rel == Relation::LessEq ? Relation::GreaterEq : Relation::LessEq;
            if (rel != Relation::Equal) ++slacks;
            if (rel != Relation::LessEq) ++artificials;
        }
        cols_ = n_ + slacks + artificials;
        first_artificial_ = n_ + slacks;
        tab_.assign(m, std::vector<Rational>(cols_ + 1, Rational(0)));
        basis_.assign(m, 0);

        std::size_t slack_at = n_;
        std::size_t art_at = first_artificial_;
        for (std::size_t i = 0; i < m; ++i) {
            const auto& row = lp.rows[i];
            const bool flip = row.rhs < 0;
            Relation rel = row.relation;
            if (flip && rel != Relation::Equal)
                rel = rel == Relation::LessEq ? Relation::GreaterEq : Relation::LessEq;
            for (std::size_t j = 0; j < n_; ++j)
                tab_[i][j] = flip ? -row.coeffs[j] : row.coeffs[j];
            tab_[i][cols_] = flip ? -row.rhs : row.rhs;
            switch (rel) {
                case Relation::LessEq:
                    tab_[i][slack_at] = 1;
                    basis_[i] = slack_at++;
                    break;
                case Relation::GreaterEq:
                    tab_[i][slack_at] = -1;
                    ++slack_at;
                    tab_[i][art_at] = 1;
                    basis_[i] = art_at++;
                    break;
                case Relation::Equal:
                    tab_[i][art_at] = 1;
                    basis_[i] = art_at++;
                    break;
            }
        }
    }

    LpSolution solve(const LinearProgram& lp) {
        // Phase 1: minimize the sum of artificial variables.
        if (first_artificial_ < cols_) {
            std::vector<Rational> phase1_cost(cols_, Rational(0));
            for (std::size_t j = first_artificial_; j < cols_; ++j) phase1_cost[j] = 1;
            run(phase1_cost, cols_);
            if (objective_of(phase1_cost) != 0) return {LpStatus::Infeasible, 0, {}};
            evict_artificials();
        }

        // Phase 2: the real objective, artificial columns barred.
        std::vector<Rational> cost(cols_, Rational(0));
        for (std::size_t j = 0; j < n_ && j < lp.objective.size(); ++j)
            cost[j] = lp.maximize ? -lp.objective[j] : lp.objective[j];
        if (!run(cost, first_artificial_)) return {LpStatus::Unbounded, 0, {}};

        LpSolution out;
        out.status = LpStatus::Optimal;
        out.point.assign(n_, Rational(0));
        for (std::size_t i = 0; i < tab_.size(); ++i)
            if (basis_[i] < n_) out.point[basis_[i]] = tab_[i][cols_];
        for (std::size_t j = 0; j < n_ && j < lp.objective.size(); ++j)
            out.objective_value += lp.objective[j] * out.point[j];
        return out;
    }

private:
    // Reduced cost of column j under the given cost vector.
    Rational reduced_cost(const std::vector<Rational>& cost, std::size_t j) const {
        Rational r = cost[j];
        for (std::size_t i = 0; i < tab_.size(); ++i)
            if (cost[basis_[i]] != 0) r -= cost[basis_[i]] * tab_[i][j];
        return r;
    }

    Rational objective_of(const std::vector<Rational>& cost) const {
        Rational v = 0;
        for (std::size_t i = 0; i < tab_.size(); ++i)
            if (cost[basis_[i]] != 0) v += cost[basis_[i]] * tab_[i][cols_];
        return v;
    }

    // Minimizes `cost`; columns at or beyond `col_limit` cannot enter.
    // Returns false when the objective is unbounded below.
    bool run(const std::vector<Rational>& cost, std::size_t col_limit) {
        while (true) {
            // Bland: the lowest-index column with negative reduced cost.
            std::size_t entering = col_limit;
            for (std::size_t j = 0; j < col_limit; ++j) {
                if (is_basic(j)) continue;
                if (reduced_cost(cost, j) < 0) {
                    entering = j;
                    break;
                }
            }
            if (entering == col_limit) return true;

            std::size_t leaving = tab_.size();
            Rational best_ratio = 0;
            for (std::size_t i = 0; i < tab_.size(); ++i) {
                if (tab_[i][entering] <= 0) continue;
                const Rational ratio = tab_[i][cols_] / tab_[i][entering];
                if (leaving == tab_.size() || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leaving])) {
                    leaving = i;
                    best_ratio = ratio;
                }
            }
            if (leaving == tab_.size()) return false;
            pivot(leaving, entering);
        }
    }

    bool is_basic(std::size_t j) const {
        for (auto b : basis_)
            if (b == j) return true;
        return false;
    }

    void pivot(std::size_t row, std::size_t col) {
        auto& pivot_row = tab_[row];
        const Rational p = pivot_row[col];
        for (auto& v : pivot_row) v /= p;
        for (std::size_t i = 0; i < tab_.size(); ++i) {
            if (i == row) continue;
            const Rational factor = tab_[i][col];
            if (factor == 0) continue;
            for (std::size_t j = 0; j <= cols_; ++j)
                tab_[i][j] -= factor * pivot_row[j];
        }
        basis_[row] = col;
    }

    // After phase 1, pivot leftover artificial variables out of the basis;
    // rows that cannot release one are redundant and get dropped.
    void evict_artificials() {
        for (std::size_t i = 0; i < tab_.size();) {
            if (basis_[i] < first_artificial_) {
                ++i;
                continue;
            }
            std::size_t col = first_artificial_;
            for (std::size_t j = 0; j < first_artificial_; ++j) {
                if (tab_[i][j] != 0) {
                    col = j;
                    break;
                }
            }
            if (col == first_artificial_) {
                tab_.erase(tab_.begin() + i);
                basis_.erase(basis_.begin() + i);
            } else {
                pivot(i, col);
                ++i;
            }
        }
    }

    std::size_t n_ = 0;
    std::size_t cols_ = 0;
    std::size_t first_artificial_ = 0;
    std::vector<std::vector<Rational>> tab_;
    std::vector<std::size_t> basis_;
};

}  // namespace detail

inline LpSolution solve(const LinearProgram& lp) {
    detail::SimplexTableau tableau(lp);
    return tableau.solve(lp);
}

}  // namespace ipw
