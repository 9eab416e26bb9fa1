#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "dimforge/error.hpp"
#include "dimforge/integer.hpp"
#include "dimforge/matrix.hpp"

namespace dimforge {

// Dense univariate polynomial, coefficients ascending by degree.
// Normal form strips trailing zeros; the zero polynomial has no coefficients
// and degree -1.
template <typename T>
class poly {
public:
    poly() = default;

    explicit poly(std::vector<T> coeffs) : c_(std::move(coeffs)) { normalize(); }

    poly(std::initializer_list<T> coeffs) : c_(coeffs) { normalize(); }

    static poly x_power(int k, T one = T(1)) {
        std::vector<T> c(static_cast<std::size_t>(k) + 1);
        c.back() = one;
        return poly(std::move(c));
    }

    static poly constant(T v) { return poly(std::vector<T>{std::move(v)}); }

    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }

    const std::vector<T>& coeffs() const noexcept { return c_; }

    T coeff(int k) const {
        if (k < 0 || k > degree()) return T{};
        return c_[static_cast<std::size_t>(k)];
    }

    const T& lead() const {
        require(!c_.empty(), errc::check_failed, "leading coefficient of zero polynomial");
        return c_.back();
    }

    bool is_monic() const { return !c_.empty() && c_.back() == unit(); }

    bool operator==(const poly& o) const { return c_ == o.c_; }
    bool operator!=(const poly& o) const { return c_ != o.c_; }

    poly operator+(const poly& o) const {
        std::vector<T> r(std::max(c_.size(), o.c_.size()));
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i < c_.size()) r[i] += c_[i];
            if (i < o.c_.size()) r[i] += o.c_[i];
        }
        return poly(std::move(r));
    }

    poly operator-(const poly& o) const {
        std::vector<T> r(std::max(c_.size(), o.c_.size()));
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i < c_.size()) r[i] += c_[i];
            if (i < o.c_.size()) r[i] -= o.c_[i];
        }
        return poly(std::move(r));
    }

    poly operator-() const {
        std::vector<T> r = c_;
        for (auto& v : r) v = -v;
        return poly(std::move(r));
    }

    poly operator*(const poly& o) const {
        if (is_zero() || o.is_zero()) return poly();
        std::vector<T> r(c_.size() + o.c_.size() - 1);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == T{}) continue;
            for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        }
        return poly(std::move(r));
    }

    poly operator*(const T& s) const {
        std::vector<T> r = c_;
        for (auto& v : r) v = v * s;
        return poly(std::move(r));
    }

    // Multiply by x^k.
    poly shift_up(int k) const {
        if (is_zero()) return poly();
        std::vector<T> r(c_.size() + static_cast<std::size_t>(k));
        std::copy(c_.begin(), c_.end(), r.begin() + k);
        return poly(std::move(r));
    }

    // Divide by x^k; requires the low coefficients to vanish.
    poly shift_down(int k) const {
        for (int i = 0; i < k && i <= degree(); ++i)
            require(c_[static_cast<std::size_t>(i)] == T{}, errc::check_failed,
                    "shift_down of polynomial with non-zero low coefficients");
        if (degree() < k) return poly();
        return poly(std::vector<T>(c_.begin() + k, c_.end()));
    }

    T eval(const T& x) const {
        T acc{};
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    poly derivative() const {
        if (degree() < 1) return poly();
        std::vector<T> r(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * T(static_cast<int>(i));
        return poly(std::move(r));
    }

    // Substitute x -> x^k.
    poly compose_power(int k) const {
        if (is_zero()) return poly();
        std::vector<T> r(static_cast<std::size_t>(degree()) * k + 1);
        for (std::size_t i = 0; i < c_.size(); ++i) r[i * static_cast<std::size_t>(k)] = c_[i];
        return poly(std::move(r));
    }

    // Quotient/remainder. Over a field any divisor works; over Int the
    // divisor's lead must divide exactly at every step (monic always works).
    std::pair<poly, poly> divmod(const poly& d) const {
        require(!d.is_zero(), errc::invalid_modulus, "polynomial division by zero");
        poly rem = *this;
        if (rem.degree() < d.degree()) return {poly(), rem};
        std::vector<T> q(static_cast<std::size_t>(rem.degree() - d.degree()) + 1);
        while (!rem.is_zero() && rem.degree() >= d.degree()) {
            T factor = divide_coeff(rem.lead(), d.lead());
            int k = rem.degree() - d.degree();
            q[static_cast<std::size_t>(k)] = factor;
            std::vector<T> nr = rem.c_;
            for (std::size_t i = 0; i < d.c_.size(); ++i)
                nr[static_cast<std::size_t>(k) + i] -= factor * d.c_[i];
            rem = poly(std::move(nr));
        }
        return {poly(std::move(q)), rem};
    }

    poly pow(unsigned long e) const {
        poly r = constant(unit());
        poly b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = (e >>= 1) ? b * b : b;
        }
        return r;
    }

    // n x n companion matrix of a monic polynomial of degree n >= 1.
    matrix<T> companion() const {
        require(is_monic(), errc::not_monic, "companion matrix needs a monic polynomial");
        int n = degree();
        require(n >= 1, errc::dimension_mismatch, "companion matrix needs degree >= 1");
        matrix<T> m(n, n);
        for (int i = 1; i < n; ++i) m.at(i, i - 1) = unit();
        for (int i = 0; i < n; ++i) m.at(i, n - 1) = -c_[static_cast<std::size_t>(i)];
        return m;
    }

private:
    void normalize() {
        while (!c_.empty() && c_.back() == T{}) c_.pop_back();
    }

    T unit() const {
        if constexpr (requires(const T& v) { v.one_like(); }) {
            require(!c_.empty(), errc::check_failed, "unit of empty field polynomial");
            return c_.front().one_like();
        } else {
            return T(1);
        }
    }

    static T divide_coeff(const T& a, const T& b) {
        if constexpr (std::is_same_v<T, Int>) {
            if (b == 1) return a;
            if (b == -1) return -a;
            return div_exact(a, b, "poly divmod");
        } else {
            return a / b;
        }
    }

    std::vector<T> c_;
};

using int_poly = poly<Int>;
using rat_poly = poly<Rat>;

inline rat_poly to_rational(const int_poly& p) {
    std::vector<Rat> c;
    c.reserve(p.coeffs().size());
    for (const auto& v : p.coeffs()) c.emplace_back(v);
    return rat_poly(std::move(c));
}

inline Int content(const int_poly& p) {
    Int g = 0;
    for (const auto& v : p.coeffs()) g = gcd_int(g, v);
    return g;
}

// Content-free part with positive leading coefficient; zero stays zero.
inline int_poly primitive_part(const int_poly& p) {
    if (p.is_zero()) return p;
    Int g = content(p);
    if (p.lead() < 0) g = -g;
    std::vector<Int> c;
    c.reserve(p.coeffs().size());
    for (const auto& v : p.coeffs()) c.push_back(v / g);
    return int_poly(std::move(c));
}

// Clears denominators and returns the primitive part.
inline int_poly primitive_from_rational(const rat_poly& p) {
    Int l = 1;
    for (const auto& v : p.coeffs()) l = lcm_int(l, denom(v));
    std::vector<Int> c;
    c.reserve(p.coeffs().size());
    for (const auto& v : p.coeffs()) c.push_back(numer(v) * (l / denom(v)));
    return primitive_part(int_poly(std::move(c)));
}

inline rat_poly monic_over_q(const int_poly& p) {
    require(!p.is_zero(), errc::invalid_modulus, "monic of zero polynomial");
    rat_poly q = to_rational(p);
    return q * make_rat(Int(1), p.lead());
}

// Primitive gcd over Z[x] via monic Euclid over Q (degrees are desk scale).
inline int_poly gcd_poly(const int_poly& a, const int_poly& b) {
    if (a.is_zero()) return primitive_part(b);
    if (b.is_zero()) return primitive_part(a);
    rat_poly f = monic_over_q(a), g = monic_over_q(b);
    while (!g.is_zero()) {
        rat_poly r = f.divmod(g).second;
        f = g;
        g = r.is_zero() ? rat_poly() : r * (Rat(1) / r.lead());
    }
    return primitive_from_rational(f);
}

// Exact division over Z[x]; fails when the division is inexact.
inline int_poly div_exact_poly(const int_poly& a, const int_poly& b) {
    rat_poly q = to_rational(a).divmod(to_rational(b)).first;
    rat_poly r = to_rational(a) - q * to_rational(b);
    require(r.is_zero(), errc::check_failed, "inexact polynomial division");
    std::vector<Int> c;
    c.reserve(q.coeffs().size());
    for (const auto& v : q.coeffs()) {
        require(denom(v) == 1, errc::check_failed, "inexact polynomial division");
        c.push_back(numer(v));
    }
    return int_poly(std::move(c));
}

// Yun decomposition: returns (g_i, e_i) with p = lc * prod g_i^{e_i},
// each g_i squarefree, primitive, pairwise coprime.
inline std::vector<std::pair<int_poly, int>> squarefree_decomposition(const int_poly& p) {
    std::vector<std::pair<int_poly, int>> out;
    int_poly f = primitive_part(p);
    if (f.degree() < 1) return out;
    int_poly d = f.derivative();
    int_poly a = gcd_poly(f, d);
    int_poly b = div_exact_poly(f, a);
    int_poly c = div_exact_poly(d, a) - b.derivative();
    int e = 1;
    while (b.degree() >= 1) {
        int_poly g = gcd_poly(b, c);
        if (g.degree() >= 1) out.emplace_back(primitive_part(g), e);
        b = div_exact_poly(b, g);
        c = div_exact_poly(c, g) - b.derivative();
        ++e;
    }
    return out;
}

} // namespace dimforge
