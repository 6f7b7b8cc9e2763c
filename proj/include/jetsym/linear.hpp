#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "jetsym/error.hpp"
#include "jetsym/scalar.hpp"

namespace jetsym {

using Vector = std::vector<GaussScalar>;
using Matrix = std::vector<Vector>;

/// Exact linear system matrix * x = rhs over Q(i).
struct LinearSystemExact {
    Matrix matrix;
    Vector rhs;
    std::vector<std::string> column_labels;

    std::size_t rows() const { return matrix.size(); }
    std::size_t cols() const { return column_labels.empty() && !matrix.empty() ? matrix[0].size()
                                                                             : column_labels.size(); }
};

struct LinearSolution {
    bool consistent = true;
    std::optional<std::size_t> inconsistent_row; ///< 0-based index into the input rows
    Vector particular;                           ///< free variables set to zero
    std::vector<Vector> nullspace;               ///< one vector per free column, in column order
    std::vector<std::size_t> pivot_columns;
    std::size_t rank = 0;
};

namespace detail {

/// In-place reduced row echelon form. Pivot for each column is the first
/// unused row (input order) with a nonzero entry. Returns pivot row per pivot column.
inline std::vector<std::pair<std::size_t, std::size_t>> rref(Matrix& a, std::size_t cols) {
    const std::size_t rows = a.size();
    std::vector<bool> used(rows, false);
    std::vector<std::pair<std::size_t, std::size_t>> pivots; // (column, row)
    std::vector<std::size_t> nz;
    for (std::size_t c = 0; c < cols; ++c) {
        std::size_t pr = rows;
        for (std::size_t r = 0; r < rows; ++r) {
            if (!used[r] && !a[r][c].is_zero()) {
                pr = r;
                break;
            }
        }
        if (pr == rows) continue;
        used[pr] = true;
        Vector& prow = a[pr];
        GaussScalar inv = prow[c].inverse();
        nz.clear();
        for (std::size_t k = 0; k < prow.size(); ++k) {
            if (prow[k].is_zero()) continue;
            prow[k] *= inv;
            nz.push_back(k);
        }
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == pr || a[r][c].is_zero()) continue;
            GaussScalar f = a[r][c];
            for (std::size_t k : nz) a[r][k] -= f * prow[k];
        }
        pivots.emplace_back(c, pr);
    }
    return pivots;
}

} // namespace detail

/// Exact Gauss-Jordan solve with deterministic pivoting. An inconsistent
/// system is reported (not thrown) with the first offending input row.
inline LinearSolution solve_linear_exact(const LinearSystemExact& sys) {
    const std::size_t rows = sys.matrix.size();
    const std::size_t cols = sys.cols();
    if (sys.rhs.size() != rows) throw Error("rhs length does not match row count");
    Matrix a;
    a.reserve(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        if (sys.matrix[r].size() != cols) throw Error("ragged matrix row " + std::to_string(r));
        Vector row = sys.matrix[r];
        row.push_back(sys.rhs[r]);
        a.push_back(std::move(row));
    }
    auto pivots = detail::rref(a, cols);

    LinearSolution sol;
    sol.rank = pivots.size();
    std::vector<bool> pivot_row(rows, false);
    std::vector<bool> is_pivot_col(cols, false);
    for (auto [c, r] : pivots) {
        pivot_row[r] = true;
        is_pivot_col[c] = true;
        sol.pivot_columns.push_back(c);
    }
    for (std::size_t r = 0; r < rows; ++r) {
        if (!pivot_row[r] && !a[r][cols].is_zero()) {
            sol.consistent = false;
            sol.inconsistent_row = r;
            return sol;
        }
    }
    sol.particular.assign(cols, GaussScalar());
    for (auto [c, r] : pivots) sol.particular[c] = a[r][cols];
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot_col[f]) continue;
        Vector v(cols, GaussScalar());
        v[f] = 1;
        for (auto [c, r] : pivots) v[c] = -a[r][f];
        sol.nullspace.push_back(std::move(v));
    }
    return sol;
}

inline std::size_t rank(Matrix a) {
    if (a.empty()) return 0;
    return detail::rref(a, a[0].size()).size();
}

/// Basis of {x : a x = 0}; `cols` is needed when `a` has no rows.
inline std::vector<Vector> nullspace(const Matrix& a, std::size_t cols) {
    LinearSystemExact sys{a, Vector(a.size(), GaussScalar()), {}};
    sys.column_labels.resize(cols);
    return solve_linear_exact(sys).nullspace;
}

/// Inverse of a square matrix; throws when singular.
inline Matrix invert(const Matrix& m) {
    const std::size_t n = m.size();
    Matrix a;
    for (std::size_t r = 0; r < n; ++r) {
        if (m[r].size() != n) throw Error("matrix is not square");
        Vector row = m[r];
        row.resize(2 * n);
        row[n + r] = 1;
        a.push_back(std::move(row));
    }
    auto pivots = detail::rref(a, n);
    if (pivots.size() != n) throw Error("matrix is singular");
    Matrix inv(n);
    for (auto [c, r] : pivots) inv[c] = Vector(a[r].begin() + static_cast<long>(n), a[r].end());
    return inv;
}

} // namespace jetsym
