#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dimforge/error.hpp"
#include "dimforge/integer.hpp"
#include "dimforge/matrix.hpp"
#include "dimforge/poly.hpp"

namespace dimforge {

struct hnf_result {
    int_matrix h;           // row-echelon Hermite form
    int_matrix u;           // unimodular, u * m == h
    std::vector<int> pivot_cols; // pivot column of each echelon row, in order
};

// Hermite normal form under unimodular row operations: pivots positive,
// entries above each pivot reduced into [0, pivot), zero rows at the bottom.
// This is the single normal-form convention used project-wide.
inline hnf_result hermite_normal_form(const int_matrix& m) {
    hnf_result res{m, int_matrix::identity(m.rows()), {}};
    int_matrix& h = res.h;
    int_matrix& u = res.u;
    int r = 0;
    for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
        // Euclidean reduction of column c below row r until one entry remains.
        while (true) {
            int best = -1;
            for (int i = r; i < h.rows(); ++i) {
                if (h.at(i, c) == 0) continue;
                if (best < 0 || abs_int(h.at(i, c)) < abs_int(h.at(best, c))) best = i;
            }
            if (best < 0) break; // column is zero below r
            if (best != r) {
                h.swap_rows(r, best);
                u.swap_rows(r, best);
            }
            bool others = false;
            for (int i = r + 1; i < h.rows(); ++i) {
                if (h.at(i, c) == 0) continue;
                others = true;
                Int q = floor_div(h.at(i, c), h.at(r, c));
                h.add_row_multiple(i, r, -q);
                u.add_row_multiple(i, r, -q);
            }
            if (!others) break;
        }
        if (h.at(r, c) == 0) continue;
        if (h.at(r, c) < 0) {
            h.negate_row(r);
            u.negate_row(r);
        }
        for (int i = 0; i < r; ++i) {
            Int q = floor_div(h.at(i, c), h.at(r, c));
            h.add_row_multiple(i, r, -q);
            u.add_row_multiple(i, r, -q);
        }
        res.pivot_cols.push_back(c);
        ++r;
    }
    return res;
}

inline int rank_of(const int_matrix& m) {
    return static_cast<int>(hermite_normal_form(m).pivot_cols.size());
}

// Fraction-free determinant (Bareiss).
inline Int determinant(const int_matrix& m) {
    require(m.is_square(), errc::not_square, "determinant");
    int n = m.rows();
    if (n == 0) return 1;
    int_matrix a = m;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a.at(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (a.at(i, k) != 0) { p = i; break; }
            if (p < 0) return 0;
            a.swap_rows(k, p);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                a.at(i, j) = div_exact(a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j), prev, "bareiss");
        prev = a.at(k, k);
    }
    return sign > 0 ? a.at(n - 1, n - 1) : -a.at(n - 1, n - 1);
}

inline bool is_unimodular(const int_matrix& m) {
    return m.is_square() && abs_int(determinant(m)) == 1;
}

// Inverse of a unimodular matrix (integer output).
inline int_matrix unimodular_inverse(const int_matrix& m) {
    require(m.is_square(), errc::not_square, "unimodular inverse");
    hnf_result h = hermite_normal_form(m);
    require(h.h == int_matrix::identity(m.rows()), errc::check_failed, "matrix is not unimodular");
    return h.u;
}

// Clears row denominators (does not change the integer kernel / row space).
inline int_matrix clear_row_denominators(const rat_matrix& m) {
    int_matrix r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i) {
        Int l = 1;
        for (int j = 0; j < m.cols(); ++j) l = lcm_int(l, denom(m.at(i, j)));
        for (int j = 0; j < m.cols(); ++j)
            r.at(i, j) = numer(m.at(i, j)) * (l / denom(m.at(i, j)));
    }
    return r;
}

// Basis of the integer kernel {x : m x = 0}, one basis vector per column.
// The basis generates the full (saturated) kernel lattice because it comes
// from a unimodular transform.
inline int_matrix kernel_basis(const int_matrix& m) {
    hnf_result ht = hermite_normal_form(m.transpose());
    int rank = static_cast<int>(ht.pivot_cols.size());
    int n = m.cols();
    int_matrix v = ht.u.transpose();        // m * v has zero columns past rank
    int_matrix k(n, n - rank);
    for (int j = rank; j < n; ++j)
        for (int i = 0; i < n; ++i) k.at(i, j - rank) = v.at(i, j);
    return k;
}

inline int_matrix kernel_basis(const rat_matrix& m) {
    return kernel_basis(clear_row_denominators(m));
}

// Saturation of the column span: basis of (span_Q(columns) intersect Z^k).
// Requires independent columns.
inline int_matrix saturate(const int_matrix& s) {
    if (s.cols() == 0) return s;
    require(rank_of(s) == s.cols(), errc::dependent_columns, "saturate needs independent columns");
    int_matrix orth = kernel_basis(s.transpose()); // rows space orthogonal to span
    return kernel_basis(orth.transpose());
}

inline bool same_lattice(const int_matrix& a, const int_matrix& b) {
    if (a.rows() != b.rows()) return false;
    auto canon = [](const int_matrix& m) {
        hnf_result h = hermite_normal_form(m.transpose());
        int rank = static_cast<int>(h.pivot_cols.size());
        int_matrix t(rank, m.rows());
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < m.rows(); ++j) t.at(i, j) = h.h.at(i, j);
        return t;
    };
    return canon(a) == canon(b);
}

// Completes the columns of s (a basis of a pure subgroup of Z^k) to a basis
// of Z^k. Returns L in GL_k(Z) whose first cols(s) columns equal s. The
// default complement is the transform-inverse rule; `pinned` overrides it
// with explicit complement columns (validated).
inline int_matrix extend_to_basis(const int_matrix& s, int k,
                                  const std::optional<int_matrix>& pinned = std::nullopt) {
    require(s.cols() == 0 || s.rows() == k, errc::dimension_mismatch, "extend_to_basis shape");
    if (pinned) {
        require(pinned->rows() == k && pinned->cols() == k - s.cols(), errc::dimension_mismatch,
                "pinned complement shape");
        int_matrix l = int_matrix::hcat(s, *pinned);
        if (s.cols() == 0) l = *pinned;
        require(is_unimodular(l), errc::not_pure, "pinned complement does not complete to a basis");
        return l;
    }
    if (s.cols() == 0) return int_matrix::identity(k);
    hnf_result h = hermite_normal_form(s);
    require(static_cast<int>(h.pivot_cols.size()) == s.cols(), errc::dependent_columns,
            "extend_to_basis needs independent columns");
    for (int i = 0; i < s.cols(); ++i)
        require(h.h.at(i, i) == 1, errc::not_pure, "column span is not a pure subgroup");
    return unimodular_inverse(h.u);
}

// Characteristic polynomial det(xI - m) by the Faddeev-LeVerrier recurrence
// (all divisions exact). Coefficients ascending, monic.
template <typename T>
poly<T> char_poly(const matrix<T>& m) {
    require(m.is_square(), errc::not_square, "char_poly");
    int n = m.rows();
    std::vector<T> c(static_cast<std::size_t>(n) + 1);
    c[static_cast<std::size_t>(n)] = T(1);
    if (n == 0) return poly<T>(std::move(c));
    matrix<T> acc = m;
    for (int k = 1; k <= n; ++k) {
        T tr{};
        for (int i = 0; i < n; ++i) tr += acc.at(i, i);
        T ck;
        if constexpr (std::is_same_v<T, Int>) {
            ck = -div_exact(tr, Int(k), "faddeev-leverrier");
        } else {
            ck = -(tr / T(k));
        }
        c[static_cast<std::size_t>(n - k)] = ck;
        if (k == n) break;
        for (int i = 0; i < n; ++i) acc.at(i, i) += ck;
        acc = m * acc;
    }
    return poly<T>(std::move(c));
}

template <typename T>
matrix<T> eval_poly_at(const poly<T>& p, const matrix<T>& m) {
    require(m.is_square(), errc::not_square, "polynomial of matrix");
    matrix<T> r(m.rows(), m.rows());
    matrix<T> id = matrix<T>::identity(m.rows());
    for (int k = p.degree(); k >= 0; --k) {
        r = r * m;
        T c = p.coeff(k);
        if (c != T{}) r = r + id * c;
    }
    return r;
}

inline int_matrix eval_int_poly_at(const int_poly& p, const int_matrix& m) {
    return eval_poly_at(p, m);
}

// Canonical integer solution of m x = b: particular solution through the
// column-style Hermite form with the kernel component set to zero.
// Returns nullopt when no integer solution exists.
inline std::optional<std::vector<Int>> solve_integer(const int_matrix& m, const std::vector<Int>& b) {
    require(static_cast<int>(b.size()) == m.rows(), errc::dimension_mismatch, "solve_integer shape");
    hnf_result ht = hermite_normal_form(m.transpose());
    int rank = static_cast<int>(ht.pivot_cols.size());
    int_matrix v = ht.u.transpose();
    // column j of (m * v) for j < rank is the transpose of echelon row j;
    // pivot of column j sits at row ht.pivot_cols[j].
    std::vector<Int> resid = b;
    std::vector<Int> y(static_cast<std::size_t>(m.cols()));
    for (int j = 0; j < rank; ++j) {
        int p = ht.pivot_cols[j];
        Int piv = ht.h.at(j, p);
        Int num = resid[static_cast<std::size_t>(p)];
        if (num % piv != 0) return std::nullopt;
        Int yj = num / piv;
        y[static_cast<std::size_t>(j)] = yj;
        if (yj != 0)
            for (int i = 0; i < m.rows(); ++i) resid[static_cast<std::size_t>(i)] -= yj * ht.h.at(j, i);
    }
    for (const Int& r : resid)
        if (r != 0) return std::nullopt;
    return v.apply(y);
}

// Solves m x = b over Q for square invertible m (exact Gaussian elimination).
inline std::vector<Rat> solve_rational(const rat_matrix& m, const std::vector<Rat>& b) {
    require(m.is_square(), errc::not_square, "solve_rational");
    int n = m.rows();
    rat_matrix a = m;
    std::vector<Rat> x = b;
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (a.at(i, c) != 0) { p = i; break; }
        require(p >= 0, errc::dependent_columns, "singular matrix in solve_rational");
        if (p != c) {
            a.swap_rows(c, p);
            std::swap(x[static_cast<std::size_t>(c)], x[static_cast<std::size_t>(p)]);
        }
        Rat piv = a.at(c, c);
        for (int i = 0; i < n; ++i) {
            if (i == c || a.at(i, c) == 0) continue;
            Rat f = a.at(i, c) / piv;
            for (int j = c; j < n; ++j) a.at(i, j) -= f * a.at(c, j);
            x[static_cast<std::size_t>(i)] -= f * x[static_cast<std::size_t>(c)];
        }
    }
    std::vector<Rat> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] / a.at(i, i);
    return out;
}

// Canonical basis (column HNF style) of the lattice generated by the columns
// of g; drops dependent generators. Full-rank input yields a k x k basis.
inline int_matrix lattice_basis(const int_matrix& g) {
    hnf_result ht = hermite_normal_form(g.transpose());
    int rank = static_cast<int>(ht.pivot_cols.size());
    int_matrix b(g.rows(), rank);
    for (int j = 0; j < rank; ++j)
        for (int i = 0; i < g.rows(); ++i) b.at(i, j) = ht.h.at(j, i);
    return b;
}

// Index [Z^k : L] for a full-rank lattice basis (k x k columns).
inline Int lattice_index(const int_matrix& basis) {
    require(basis.is_square(), errc::not_square, "lattice_index");
    Int d = determinant(basis);
    require(d != 0, errc::dependent_columns, "lattice_index of singular basis");
    return abs_int(d);
}

} // namespace dimforge
