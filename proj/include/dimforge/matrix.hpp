#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "dimforge/error.hpp"
#include "dimforge/integer.hpp"

namespace dimforge {

// Dense row-major matrix over an exact scalar (Int, Rat, nf_element).
// Column vectors represent lattice/group elements throughout the library.
template <typename T>
class matrix {
public:
    matrix() = default;

    matrix(int rows, int cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
        require(rows >= 0 && cols >= 0, errc::dimension_mismatch, "negative matrix dimension");
    }

    matrix(std::initializer_list<std::initializer_list<T>> rows) {
        rows_ = static_cast<int>(rows.size());
        cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
        data_.reserve(static_cast<std::size_t>(rows_) * cols_);
        for (const auto& r : rows) {
            require(static_cast<int>(r.size()) == cols_, errc::dimension_mismatch, "ragged initializer");
            for (const auto& v : r) data_.push_back(v);
        }
    }

    static matrix identity(int n, T one = T(1)) {
        matrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = one;
        return m;
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
    bool is_square() const noexcept { return rows_ == cols_; }

    T& at(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    const T& at(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    // Row-major flat storage.
    const std::vector<T>& data() const noexcept { return data_; }

    bool operator==(const matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const matrix& o) const { return !(*this == o); }

    matrix transpose() const {
        matrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    matrix operator+(const matrix& o) const {
        require(rows_ == o.rows_ && cols_ == o.cols_, errc::dimension_mismatch, "matrix add shape");
        matrix r = *this;
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] += o.data_[k];
        return r;
    }

    matrix operator-(const matrix& o) const {
        require(rows_ == o.rows_ && cols_ == o.cols_, errc::dimension_mismatch, "matrix sub shape");
        matrix r = *this;
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] -= o.data_[k];
        return r;
    }

    matrix operator-() const {
        matrix r = *this;
        for (auto& v : r.data_) v = -v;
        return r;
    }

    matrix operator*(const matrix& o) const {
        require(cols_ == o.rows_, errc::dimension_mismatch, "matrix mul shape");
        matrix r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const T& a = at(i, k);
                if (a == T{}) continue;
                for (int j = 0; j < o.cols_; ++j) r.at(i, j) += a * o.at(k, j);
            }
        return r;
    }

    matrix operator*(const T& s) const {
        matrix r = *this;
        for (auto& v : r.data_) v = v * s;
        return r;
    }

    std::vector<T> apply(const std::vector<T>& x) const {
        require(static_cast<int>(x.size()) == cols_, errc::dimension_mismatch, "matrix apply shape");
        std::vector<T> y(static_cast<std::size_t>(rows_));
        for (int i = 0; i < rows_; ++i) {
            T acc{};
            for (int j = 0; j < cols_; ++j) acc += at(i, j) * x[j];
            y[static_cast<std::size_t>(i)] = acc;
        }
        return y;
    }

    matrix pow(unsigned long e) const {
        require(is_square(), errc::not_square, "matrix power");
        matrix r = identity(rows_, unit_like());
        matrix b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = (e >>= 1) ? b * b : b;
        }
        return r;
    }

    std::vector<T> column(int j) const {
        std::vector<T> c(static_cast<std::size_t>(rows_));
        for (int i = 0; i < rows_; ++i) c[static_cast<std::size_t>(i)] = at(i, j);
        return c;
    }

    std::vector<T> row(int i) const {
        std::vector<T> r(static_cast<std::size_t>(cols_));
        for (int j = 0; j < cols_; ++j) r[static_cast<std::size_t>(j)] = at(i, j);
        return r;
    }

    void set_column(int j, const std::vector<T>& c) {
        require(static_cast<int>(c.size()) == rows_, errc::dimension_mismatch, "set_column shape");
        for (int i = 0; i < rows_; ++i) at(i, j) = c[static_cast<std::size_t>(i)];
    }

    // Columns [j0, j1) as a new matrix.
    matrix column_slice(int j0, int j1) const {
        matrix r(rows_, j1 - j0);
        for (int i = 0; i < rows_; ++i)
            for (int j = j0; j < j1; ++j) r.at(i, j - j0) = at(i, j);
        return r;
    }

    static matrix hcat(const matrix& a, const matrix& b) {
        if (a.cols_ == 0 && a.rows_ == 0) return b;
        if (b.cols_ == 0 && b.rows_ == 0) return a;
        require(a.rows_ == b.rows_, errc::dimension_mismatch, "hcat shape");
        matrix r(a.rows_, a.cols_ + b.cols_);
        for (int i = 0; i < a.rows_; ++i) {
            for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
            for (int j = 0; j < b.cols_; ++j) r.at(i, a.cols_ + j) = b.at(i, j);
        }
        return r;
    }

    static matrix vcat(const matrix& a, const matrix& b) {
        if (a.rows_ == 0 && a.cols_ == 0) return b;
        if (b.rows_ == 0 && b.cols_ == 0) return a;
        require(a.cols_ == b.cols_, errc::dimension_mismatch, "vcat shape");
        matrix r(a.rows_ + b.rows_, a.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
        for (int i = 0; i < b.rows_; ++i)
            for (int j = 0; j < b.cols_; ++j) r.at(a.rows_ + i, j) = b.at(i, j);
        return r;
    }

    static matrix from_column(const std::vector<T>& c) {
        matrix r(static_cast<int>(c.size()), 1);
        for (int i = 0; i < r.rows_; ++i) r.at(i, 0) = c[static_cast<std::size_t>(i)];
        return r;
    }

    void swap_rows(int a, int b) {
        for (int j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
    }

    // row[a] += s * row[b]
    void add_row_multiple(int a, int b, const T& s) {
        if (s == T{}) return;
        for (int j = 0; j < cols_; ++j) at(a, j) += s * at(b, j);
    }

    void negate_row(int a) {
        for (int j = 0; j < cols_; ++j) at(a, j) = -at(a, j);
    }

private:
    // Multiplicative unit with the right runtime type (nf_element carries its
    // field; plain scalars just use T(1)).
    T unit_like() const {
        if constexpr (requires(const T& v) { v.one_like(); }) {
            require(!data_.empty(), errc::dimension_mismatch, "unit of empty matrix");
            return data_.front().one_like();
        } else {
            return T(1);
        }
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> data_;
};

using int_matrix = matrix<Int>;
using rat_matrix = matrix<Rat>;

inline rat_matrix to_rational(const int_matrix& m) {
    rat_matrix r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r.at(i, j) = Rat(m.at(i, j));
    return r;
}

// Exact conversion; fails if any entry has a denominator.
inline int_matrix to_integer(const rat_matrix& m, const char* where) {
    int_matrix r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            require(denom(m.at(i, j)) == 1, errc::no_integer_solution,
                    std::string("non-integer entry in ") + where);
            r.at(i, j) = numer(m.at(i, j));
        }
    return r;
}

} // namespace dimforge
