#pragma once

#include <algorithm>
#include <deque>
#include <utility>
#include <vector>

#include "dimforge/error.hpp"
#include "dimforge/factor.hpp"
#include "dimforge/integer.hpp"
#include "dimforge/poly.hpp"

namespace dimforge {

inline Rat eval_at(const int_poly& f, const Rat& x) {
    Rat acc(0);
    for (int i = f.degree(); i >= 0; --i) acc = acc * x + Rat(f.coeff(i));
    return acc;
}

inline int sign_at(const int_poly& f, const Rat& x) { return sign_of(eval_at(f, x)); }

// Positive-scalar normalization to a primitive integer polynomial. Unlike
// primitive_part this keeps the sign of the leading coefficient, which Sturm
// sequences depend on.
inline int_poly scale_primitive_signed(const rat_poly& f) {
    if (f.is_zero()) return int_poly();
    Int l(1);
    for (const Rat& c : f.coeffs()) l = lcm_int(l, denom(c));
    std::vector<Int> c(f.coeffs().size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Rat& q = f.coeffs()[i];
        c[i] = numer(q) * div_exact(l, denom(q), "primitive scaling");
    }
    Int g(0);
    for (const Int& x : c) g = gcd_int(g, x);
    for (Int& x : c) x = div_exact(x, g, "primitive scaling");
    return int_poly(std::move(c));
}

// Strict bound: every complex root z of f satisfies |z| < cauchy_root_bound(f).
inline Rat cauchy_root_bound(const int_poly& f) {
    require(f.degree() >= 1, errc::check_failed, "root bound needs a non-constant polynomial");
    Rat s(0);
    for (int i = 0; i < f.degree(); ++i) s += make_rat(abs_int(f.coeff(i)), abs_int(f.lead()));
    return Rat(1) + s;
}

// Sturm sequence of a squarefree polynomial; counts distinct real roots in
// open intervals whose endpoints are not roots.
class sturm_chain {
public:
    explicit sturm_chain(const int_poly& p) {
        require(p.degree() >= 1, errc::check_failed, "sturm chain needs a non-constant polynomial");
        seq_.push_back(p);
        seq_.push_back(p.derivative());
        while (seq_.back().degree() >= 1) {
            rat_poly r = to_rational(seq_[seq_.size() - 2]).divmod(to_rational(seq_.back())).second;
            if (r.is_zero()) fail(errc::check_failed, "sturm chain needs a squarefree polynomial");
            seq_.push_back(scale_primitive_signed(rat_poly() - r));
        }
        require(!seq_.back().is_zero(), errc::check_failed, "sturm chain degenerated");
    }

    int variations_at(const Rat& x) const {
        int last = 0, v = 0;
        for (const int_poly& s : seq_) {
            int sg = sign_at(s, x);
            if (sg == 0) continue;
            if (last != 0 && sg != last) ++v;
            last = sg;
        }
        return v;
    }

    // Number of roots in the open interval (lo, hi); endpoints must not be roots.
    int count_in(const Rat& lo, const Rat& hi) const {
        require(lo < hi, errc::check_failed, "empty sturm interval");
        require(sign_at(seq_.front(), lo) != 0 && sign_at(seq_.front(), hi) != 0, errc::check_failed,
                "sturm interval endpoint hits a root");
        return variations_at(lo) - variations_at(hi);
    }

    const int_poly& polynomial() const { return seq_.front(); }

private:
    std::vector<int_poly> seq_;
};

// A real algebraic number: an irreducible primitive minimal polynomial with a
// positive lead, plus an open isolating interval with non-root endpoints.
class algebraic_number {
public:
    algebraic_number() : algebraic_number(int_poly(std::vector<Int>{Int(0), Int(1)}), Rat(-1), Rat(1), false) {}

    algebraic_number(int_poly min_poly, Rat lo, Rat hi)
        : algebraic_number(std::move(min_poly), std::move(lo), std::move(hi), true) {}

    static algebraic_number unchecked(int_poly min_poly, Rat lo, Rat hi) {
        return algebraic_number(std::move(min_poly), std::move(lo), std::move(hi), false);
    }

    static algebraic_number from_rational(const Rat& r) {
        std::vector<Int> c{-numer(r), denom(r)};
        return unchecked(int_poly(std::move(c)), r - 1, r + 1);
    }

    const int_poly& min_poly() const { return minpoly_; }
    int degree() const { return minpoly_.degree(); }
    bool is_rational() const { return minpoly_.degree() == 1; }

    Rat rational_value() const {
        require(is_rational(), errc::check_failed, "algebraic number is irrational");
        return make_rat(-minpoly_.coeff(0), minpoly_.coeff(1));
    }

    const Rat& lo() const { return lo_; }
    const Rat& hi() const { return hi_; }
    Rat width() const { return hi_ - lo_; }
    Rat midpoint() const { return (lo_ + hi_) / 2; }

    // Halves the isolating interval while keeping endpoints off the roots.
    void refine() {
        if (is_rational()) {
            Rat r = rational_value();
            lo_ = (lo_ + r) / 2;
            hi_ = (hi_ + r) / 2;
            return;
        }
        Rat mid = midpoint();
        int sm = sign_at(minpoly_, mid);
        if (sm == 0) {
            Rat w = width() / 8;
            lo_ = mid - w;
            hi_ = mid + w;
            return;
        }
        if (sm == sign_at(minpoly_, lo_)) lo_ = mid;
        else hi_ = mid;
    }

    void refine_below(const Rat& eps) {
        while (width() >= eps) refine();
    }

    int sign() const {
        if (is_rational()) return sign_of(rational_value());
        if (minpoly_.coeff(0) == 0) return 0;
        algebraic_number t = *this;
        while (t.lo_ < 0 && t.hi_ > 0) t.refine();
        return t.lo_ >= 0 ? 1 : -1;
    }

    // Total order on the represented real numbers; refines working copies
    // until the answer is certified.
    static int compare(const algebraic_number& a, const algebraic_number& b) {
        algebraic_number x = a, y = b;
        bool same_poly = x.minpoly_ == y.minpoly_;
        while (true) {
            if (x.hi_ <= y.lo_) return -1;
            if (y.hi_ <= x.lo_) return 1;
            if (same_poly) {
                Rat ilo = std::max(x.lo_, y.lo_);
                Rat ihi = std::min(x.hi_, y.hi_);
                if (ilo < ihi && sturm_chain(x.minpoly_).count_in(ilo, ihi) == 1) return 0;
            }
            x.refine();
            y.refine();
        }
    }

    bool equals(const algebraic_number& other) const { return compare(*this, other) == 0; }

    // The algebraic number -x, with minimal polynomial +-f(-x).
    algebraic_number negated() const {
        std::vector<Int> c = minpoly_.coeffs();
        for (std::size_t i = 1; i < c.size(); i += 2) c[i] = -c[i];
        if (c.back() < 0)
            for (Int& v : c) v = -v;
        return unchecked(int_poly(std::move(c)), -hi_, -lo_);
    }

private:
    algebraic_number(int_poly min_poly, Rat lo, Rat hi, bool check_irreducible)
        : minpoly_(std::move(min_poly)), lo_(std::move(lo)), hi_(std::move(hi)) {
        require(minpoly_.degree() >= 1, errc::check_failed, "minimal polynomial must be non-constant");
        require(minpoly_ == primitive_part(minpoly_), errc::check_failed,
                "minimal polynomial must be primitive with positive lead");
        require(lo_ < hi_, errc::check_failed, "empty isolating interval");
        require(sign_at(minpoly_, lo_) * sign_at(minpoly_, hi_) == -1, errc::check_failed,
                "isolating interval must straddle exactly one simple root");
        if (check_irreducible) {
            require(is_irreducible(minpoly_), errc::not_irreducible, "minimal polynomial must be irreducible");
            require(sturm_chain(minpoly_).count_in(lo_, hi_) == 1, errc::check_failed,
                    "interval does not isolate a single root");
        }
    }

    int_poly minpoly_;
    Rat lo_, hi_;
};

namespace detail_roots {

// Isolating intervals for all real roots of a squarefree polynomial, with
// non-root rational endpoints, pairwise disjoint, sorted ascending.
inline std::vector<std::pair<Rat, Rat>> isolate_squarefree(const int_poly& f) {
    sturm_chain chain(f);
    Rat bound = cauchy_root_bound(f);
    std::vector<std::pair<Rat, Rat>> out;
    std::deque<std::pair<std::pair<Rat, Rat>, int>> queue;
    int total = chain.count_in(-bound, bound);
    if (total > 0) queue.push_back({{-bound, bound}, total});
    while (!queue.empty()) {
        auto [iv, k] = queue.front();
        queue.pop_front();
        if (k == 1) {
            out.push_back(iv);
            continue;
        }
        Rat mid = (iv.first + iv.second) / 2;
        if (sign_at(f, mid) == 0) {
            Rat eps = (iv.second - iv.first) / 4;
            while (sign_at(f, mid - eps) == 0 || sign_at(f, mid + eps) == 0 ||
                   chain.count_in(mid - eps, mid + eps) != 1)
                eps /= 2;
            out.push_back({mid - eps, mid + eps});
            int left = chain.count_in(iv.first, mid - eps);
            int right = k - 1 - left;
            if (left > 0) queue.push_back({{iv.first, mid - eps}, left});
            if (right > 0) queue.push_back({{mid + eps, iv.second}, right});
        } else {
            int left = chain.count_in(iv.first, mid);
            int right = k - left;
            if (left > 0) queue.push_back({{iv.first, mid}, left});
            if (right > 0) queue.push_back({{mid, iv.second}, right});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

} // namespace detail_roots

// All distinct real roots of p, each tagged with its irreducible factor,
// isolating intervals pairwise disjoint, sorted ascending.
inline std::vector<algebraic_number> isolate_real_roots(const int_poly& p) {
    require(!p.is_zero(), errc::check_failed, "cannot isolate roots of the zero polynomial");
    std::vector<algebraic_number> roots;
    if (p.degree() == 0) return roots;
    for (const auto& [f, mult] : factor_rational(p)) {
        (void)mult;
        for (const auto& [lo, hi] : detail_roots::isolate_squarefree(f))
            roots.push_back(algebraic_number::unchecked(f, lo, hi));
    }
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (roots[i].min_poly() == roots[j].min_poly()) continue;
            while (roots[i].hi() > roots[j].lo() && roots[j].hi() > roots[i].lo()) {
                roots[i].refine();
                roots[j].refine();
            }
        }
    std::sort(roots.begin(), roots.end(),
              [](const algebraic_number& a, const algebraic_number& b) { return a.lo() < b.lo(); });
    return roots;
}

// One root-squaring step: the roots of the result are the squares of the
// roots of the input; monic stays monic.
template <typename T>
poly<T> graeffe_step(const poly<T>& p) {
    int n = p.degree();
    require(n >= 1, errc::check_failed, "root squaring needs a non-constant polynomial");
    std::vector<T> flipped = p.coeffs();
    for (std::size_t i = 1; i < flipped.size(); i += 2) flipped[i] = -flipped[i];
    poly<T> q = p * poly<T>(std::move(flipped));
    std::vector<T> even(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        T c = q.coeff(2 * k);
        even[static_cast<std::size_t>(k)] = (n % 2 == 1) ? -c : c;
    }
    return poly<T>(std::move(even));
}

// Sufficient certificate that every complex root z of f satisfies |z| < r.
inline bool strictly_bounds_roots(const int_poly& f, const Rat& r) {
    require(f.degree() >= 0 && !f.is_zero(), errc::check_failed, "empty polynomial in root bound test");
    if (f.degree() == 0) return true;
    require(r > 0, errc::check_failed, "root bound radius must be positive");
    Rat lhs(0), pw(1);
    for (int k = 0; k < f.degree(); ++k) {
        lhs += Rat(abs_int(f.coeff(k))) * pw;
        pw *= r;
    }
    return lhs < Rat(abs_int(f.lead())) * pw;
}

} // namespace dimforge
