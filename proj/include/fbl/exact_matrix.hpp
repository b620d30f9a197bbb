#pragma once

#include <cassert>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "fbl/errors.hpp"
#include "fbl/poly.hpp"
#include "fbl/rational.hpp"

namespace fbl {

// Dense matrix over an exact scalar type (Rational or Poly). Sizes stay tiny
// here (at most 8x8), so everything is plain O(n^3) arithmetic.
template <class T>
class ExactMatrix {
  public:
    ExactMatrix() = default;
    ExactMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols) {}

    static ExactMatrix identity(int n) {
        ExactMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = T(Rational(1));
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    T& at(int i, int j) {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        return e_[static_cast<size_t>(i) * cols_ + j];
    }
    const T& at(int i, int j) const {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        return e_[static_cast<size_t>(i) * cols_ + j];
    }

    ExactMatrix transposed() const {
        ExactMatrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
        assert(a.cols_ == b.rows_);
        ExactMatrix r(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const T& aik = a.at(i, k);
                if (is_zero_value(aik)) continue;
                for (int j = 0; j < b.cols_; ++j) r.at(i, j) += aik * b.at(k, j);
            }
        return r;
    }

    std::vector<T> apply(const std::vector<T>& x) const {
        assert(static_cast<int>(x.size()) == cols_);
        std::vector<T> y(static_cast<size_t>(rows_));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) y[static_cast<size_t>(i)] += at(i, j) * x[static_cast<size_t>(j)];
        return y;
    }

    friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }

    static bool is_zero_value(const Rational& v) { return v == 0; }
    static bool is_zero_value(const Poly& v) { return v.is_zero(); }

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> e_;
};

using RationalMatrix = ExactMatrix<Rational>;
using PolyMatrix = ExactMatrix<Poly>;

inline PolyMatrix to_poly(const RationalMatrix& m) {
    PolyMatrix p(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) p.at(i, j) = Poly(m.at(i, j));
    return p;
}

// Elementary row operation, recorded so normal-form reductions are replayable.
struct RowOp {
    enum class Kind { Swap, Scale, Axpy } kind;
    int i = 0;       // target row
    int j = 0;       // source row (Swap, Axpy)
    Rational factor; // Scale: row_i *= factor; Axpy: row_i += factor * row_j
};

inline void apply_row_op(RationalMatrix& m, const RowOp& op) {
    switch (op.kind) {
        case RowOp::Kind::Swap:
            for (int c = 0; c < m.cols(); ++c) std::swap(m.at(op.i, c), m.at(op.j, c));
            break;
        case RowOp::Kind::Scale:
            for (int c = 0; c < m.cols(); ++c) m.at(op.i, c) *= op.factor;
            break;
        case RowOp::Kind::Axpy:
            for (int c = 0; c < m.cols(); ++c) m.at(op.i, c) += op.factor * m.at(op.j, c);
            break;
    }
}

struct RrefResult {
    RationalMatrix reduced;
    std::vector<int> pivot_cols;  // in the order pivots were found
    int rank = 0;
};

inline std::vector<int> natural_column_order(int cols) {
    std::vector<int> order(static_cast<size_t>(cols));
    std::iota(order.begin(), order.end(), 0);
    return order;
}

// Gauss-Jordan elimination processing columns in the given priority order.
// Pivot choice per column: first row (top down) with a nonzero entry.
inline RrefResult rref_ordered(RationalMatrix m, const std::vector<int>& column_order,
                               std::vector<RowOp>* op_log = nullptr) {
    auto log = [&](RowOp op) {
        apply_row_op(m, op);
        if (op_log) op_log->push_back(std::move(op));
    };
    int row = 0;
    RrefResult result;
    for (int col : column_order) {
        if (row >= m.rows()) break;
        int pivot = -1;
        for (int r = row; r < m.rows(); ++r)
            if (m.at(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        if (pivot != row) log({RowOp::Kind::Swap, row, pivot, Rational(0)});
        if (m.at(row, col) != 1) log({RowOp::Kind::Scale, row, 0, Rational(1) / m.at(row, col)});
        for (int r = 0; r < m.rows(); ++r) {
            if (r == row || m.at(r, col) == 0) continue;
            log({RowOp::Kind::Axpy, r, row, -m.at(r, col)});
        }
        result.pivot_cols.push_back(col);
        ++row;
    }
    result.rank = row;
    result.reduced = std::move(m);
    return result;
}

inline RrefResult rref(const RationalMatrix& m, std::vector<RowOp>* op_log = nullptr) {
    return rref_ordered(m, natural_column_order(m.cols()), op_log);
}

inline int rank(const RationalMatrix& m) { return rref(m).rank; }

// Kernel basis from the reduced form: one column per free variable, the free
// variable set to 1 (in the given column order) and the other free variables 0.
inline RationalMatrix nullspace_basis_ordered(const RationalMatrix& m,
                                              const std::vector<int>& column_order) {
    RrefResult r = rref_ordered(m, column_order);
    std::vector<bool> is_pivot(static_cast<size_t>(m.cols()), false);
    for (int c : r.pivot_cols) is_pivot[static_cast<size_t>(c)] = true;
    std::vector<int> free_cols;
    for (int c : column_order)
        if (!is_pivot[static_cast<size_t>(c)]) free_cols.push_back(c);

    RationalMatrix basis(m.cols(), static_cast<int>(free_cols.size()));
    for (size_t k = 0; k < free_cols.size(); ++k) {
        int f = free_cols[k];
        basis.at(f, static_cast<int>(k)) = 1;
        for (size_t p = 0; p < r.pivot_cols.size(); ++p)
            basis.at(r.pivot_cols[p], static_cast<int>(k)) = -r.reduced.at(static_cast<int>(p), f);
    }
    return basis;
}

inline RationalMatrix nullspace_basis(const RationalMatrix& m) {
    return nullspace_basis_ordered(m, natural_column_order(m.cols()));
}

// Deterministic particular solution of m x = b: pivot variables by
// back-substitution, free variables zero. Empty result when inconsistent.
inline std::optional<std::vector<Rational>> solve_particular_ordered(
    const RationalMatrix& m, const std::vector<Rational>& b, const std::vector<int>& column_order) {
    assert(static_cast<int>(b.size()) == m.rows());
    RationalMatrix aug(m.rows(), m.cols() + 1);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols()) = b[static_cast<size_t>(i)];
    }
    RrefResult r = rref_ordered(aug, column_order);  // rhs column excluded from the order
    for (int i = 0; i < m.rows(); ++i) {
        bool zero_row = true;
        for (int j = 0; j < m.cols(); ++j)
            if (r.reduced.at(i, j) != 0) {
                zero_row = false;
                break;
            }
        if (zero_row && r.reduced.at(i, m.cols()) != 0) return std::nullopt;
    }
    std::vector<Rational> x(static_cast<size_t>(m.cols()), Rational(0));
    for (size_t p = 0; p < r.pivot_cols.size(); ++p)
        x[static_cast<size_t>(r.pivot_cols[p])] = r.reduced.at(static_cast<int>(p), m.cols());
    return x;
}

inline std::optional<std::vector<Rational>> solve_particular(const RationalMatrix& m,
                                                             const std::vector<Rational>& b) {
    return solve_particular_ordered(m, b, natural_column_order(m.cols()));
}

inline Rational divide_entry(const Rational& a, const Rational& b) { return a / b; }
inline Poly divide_entry(const Poly& a, const Poly& b) {
    if (a.is_zero()) return Poly();
    return Poly::divide_exact(a, b);
}

// Fraction-free (Bareiss) determinant; exact for both Rational and Poly entries.
template <class T>
T det_bareiss(ExactMatrix<T> m) {
    assert(m.rows() == m.cols());
    const int n = m.rows();
    if (n == 0) return T(Rational(1));
    T prev = T(Rational(1));
    int sign_flips = 0;
    for (int k = 0; k < n - 1; ++k) {
        if (ExactMatrix<T>::is_zero_value(m.at(k, k))) {
            int pivot = -1;
            for (int r = k + 1; r < n; ++r)
                if (!ExactMatrix<T>::is_zero_value(m.at(r, k))) {
                    pivot = r;
                    break;
                }
            if (pivot < 0) return T();  // singular
            for (int c = 0; c < n; ++c) std::swap(m.at(k, c), m.at(pivot, c));
            ++sign_flips;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                T num = m.at(k, k) * m.at(i, j) - m.at(i, k) * m.at(k, j);
                m.at(i, j) = divide_entry(num, prev);
            }
        prev = m.at(k, k);
    }
    T det = m.at(n - 1, n - 1);
    return (sign_flips % 2 == 0) ? det : T() - det;
}

// Left kernel of m, returned with basis vectors as rows.
//
// When the left nullity is exactly one and m is (k+1) x k, the vector of
// signed maximal minors of m^T is used: w_j = (-1)^j det(m^T without column j).
// That choice is deterministic, stays polynomial for polynomial entries, and
// up to scaling matches elimination. Other shapes fall back to kernel
// computation on m^T (rational entries only).
inline std::vector<std::vector<Poly>> left_nullspace_basis(const PolyMatrix& m) {
    const PolyMatrix a = m.transposed();  // r x c with expected rank c-1... rows=cols(m)
    const int r = a.rows(), c = a.cols();
    if (c != r + 1)
        throw DimensionMismatchError("polynomial left nullspace implemented for (k+1) x k matrices only");
    std::vector<Poly> w(static_cast<size_t>(c));
    bool all_zero = true;
    for (int j = 0; j < c; ++j) {
        PolyMatrix minor(r, r);
        for (int i = 0; i < r; ++i) {
            int cc = 0;
            for (int jj = 0; jj < c; ++jj) {
                if (jj == j) continue;
                minor.at(i, cc++) = a.at(i, jj);
            }
        }
        Poly d = det_bareiss(minor);
        if (j % 2 == 1) d = Poly() - d;
        if (!d.is_zero()) all_zero = false;
        w[static_cast<size_t>(j)] = std::move(d);
    }
    if (all_zero) return {};  // rank below c-1: degenerate, caller decides
    return {std::move(w)};
}

inline std::vector<std::vector<Rational>> left_nullspace_basis(const RationalMatrix& m) {
    const RationalMatrix t = m.transposed();
    const int rk = rank(t);
    if (t.cols() == t.rows() + 1 && rk == t.rows()) {
        auto rows = left_nullspace_basis(to_poly(m));
        std::vector<Rational> w(rows[0].size());
        for (size_t j = 0; j < w.size(); ++j) {
            assert(rows[0][j].degree() <= 0);
            w[j] = rows[0][j].coeff(0);
        }
        return {std::move(w)};
    }
    RationalMatrix basis = nullspace_basis(t);
    std::vector<std::vector<Rational>> result;
    for (int k = 0; k < basis.cols(); ++k) {
        std::vector<Rational> row(static_cast<size_t>(basis.rows()));
        for (int i = 0; i < basis.rows(); ++i) row[static_cast<size_t>(i)] = basis.at(i, k);
        result.push_back(std::move(row));
    }
    return result;
}

}  // namespace fbl
