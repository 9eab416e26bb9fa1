#pragma once

#include <algorithm>
#include <memory>
#include <tuple>
#include <utility>
#include <vector>

#include "dimforge/error.hpp"
#include "dimforge/integer.hpp"
#include "dimforge/matrix.hpp"
#include "dimforge/poly.hpp"
#include "dimforge/real_roots.hpp"

namespace dimforge {

// Interval extension of polynomial evaluation: f([lo, hi]) is contained in
// the returned interval.
inline std::pair<Rat, Rat> interval_eval(const rat_poly& f, const Rat& lo, const Rat& hi) {
    Rat L(0), H(0);
    for (int i = f.degree(); i >= 0; --i) {
        Rat p1 = L * lo, p2 = L * hi, p3 = H * lo, p4 = H * hi;
        Rat nl = std::min(std::min(p1, p2), std::min(p3, p4));
        Rat nh = std::max(std::max(p1, p2), std::max(p3, p4));
        const Rat c(f.coeff(i));
        L = nl + c;
        H = nh + c;
    }
    return {L, H};
}

inline std::pair<Rat, Rat> interval_eval(const int_poly& f, const Rat& lo, const Rat& hi) {
    return interval_eval(to_rational(f), lo, hi);
}

// Exact sign of f at an algebraic point: zero iff the minimal polynomial
// divides f, otherwise certified by interval refinement.
inline int sign_at_algebraic(const int_poly& f, const algebraic_number& a) {
    if (f.is_zero()) return 0;
    if (to_rational(f).divmod(to_rational(a.min_poly())).second.is_zero()) return 0;
    algebraic_number t = a;
    while (true) {
        auto [lo, hi] = interval_eval(f, t.lo(), t.hi());
        if (lo > 0) return 1;
        if (hi < 0) return -1;
        t.refine();
    }
}

// The real field Q(lambda) presented on the power basis of an irreducible
// minimal polynomial; the root enclosure refines on demand.
struct nf_context {
    int_poly min_poly;
    rat_poly monic;
    mutable algebraic_number root;

    explicit nf_context(algebraic_number r)
        : min_poly(r.min_poly()), monic(monic_over_q(r.min_poly())), root(std::move(r)) {}

    int degree() const { return min_poly.degree(); }
};

using nf_field = std::shared_ptr<const nf_context>;

inline nf_field make_field(algebraic_number root) { return std::make_shared<nf_context>(std::move(root)); }

// Element of Q(lambda) on the power basis. A null field denotes a plain
// rational, which mixes freely with elements of any single field.
class nf_element {
public:
    nf_element() : c_{Rat(0)} {}
    nf_element(int v) : c_{Rat(v)} {}
    explicit nf_element(Rat v) : c_{std::move(v)} {}
    explicit nf_element(const Int& v) : c_{Rat(v)} {}

    nf_element(nf_field fld, std::vector<Rat> coords) : fld_(std::move(fld)), c_(std::move(coords)) {
        require(fld_ != nullptr, errc::check_failed, "field element needs a field");
        require(static_cast<int>(c_.size()) == fld_->degree(), errc::dimension_mismatch,
                "coordinate length must match the field degree");
    }

    static nf_element generator(const nf_field& fld) {
        require(fld->degree() >= 2, errc::check_failed, "field generator of a rational field");
        std::vector<Rat> c(static_cast<std::size_t>(fld->degree()), Rat(0));
        c[1] = 1;
        return nf_element(fld, std::move(c));
    }

    static nf_element in_field(const nf_field& fld, const Rat& v) {
        if (fld == nullptr) return nf_element(v);
        std::vector<Rat> c(static_cast<std::size_t>(fld->degree()), Rat(0));
        c[0] = v;
        return nf_element(fld, std::move(c));
    }

    const nf_field& field() const { return fld_; }
    const std::vector<Rat>& coords() const { return c_; }

    bool is_zero() const {
        for (const Rat& v : c_)
            if (v != 0) return false;
        return true;
    }

    bool is_rational() const {
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }

    Rat rational_value() const {
        require(is_rational(), errc::check_failed, "element is irrational");
        return c_[0];
    }

    nf_element one_like() const { return in_field(fld_, Rat(1)); }

    bool operator==(const nf_element& o) const { return (*this - o).is_zero(); }
    bool operator!=(const nf_element& o) const { return !(*this == o); }

    nf_element operator-() const {
        nf_element r = *this;
        for (Rat& v : r.c_) v = -v;
        return r;
    }

    nf_element operator+(const nf_element& o) const {
        auto [fld, a, b] = aligned(*this, o);
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        return from_aligned(fld, std::move(a));
    }

    nf_element operator-(const nf_element& o) const {
        auto [fld, a, b] = aligned(*this, o);
        for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
        return from_aligned(fld, std::move(a));
    }

    nf_element operator*(const nf_element& o) const {
        auto [fld, a, b] = aligned(*this, o);
        rat_poly prod = rat_poly(std::move(a)) * rat_poly(std::move(b));
        if (fld != nullptr) prod = prod.divmod(fld->monic).second;
        std::vector<Rat> c = prod.coeffs();
        c.resize(fld == nullptr ? 1 : static_cast<std::size_t>(fld->degree()), Rat(0));
        return from_aligned(fld, std::move(c));
    }

    nf_element& operator+=(const nf_element& o) { return *this = *this + o; }
    nf_element& operator-=(const nf_element& o) { return *this = *this - o; }
    nf_element& operator*=(const nf_element& o) { return *this = *this * o; }

    nf_element inverse() const {
        require(!is_zero(), errc::check_failed, "division by zero field element");
        if (fld_ == nullptr || is_rational()) {
            require(c_[0] != 0, errc::check_failed, "division by zero field element");
            return in_field(fld_, Rat(1) / c_[0]);
        }
        // Extended Euclid in Q[x]: s*a + t*f = 1, so s is the inverse mod f.
        rat_poly r0 = fld_->monic, r1(c_);
        rat_poly s0, s1 = rat_poly::constant(Rat(1));
        while (!r1.is_zero() && r1.degree() >= 1) {
            auto [q, r2] = r0.divmod(r1);
            rat_poly s2 = s0 - q * s1;
            r0 = std::move(r1);
            r1 = std::move(r2);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        require(!r1.is_zero(), errc::check_failed, "minimal polynomial not irreducible");
        rat_poly inv = s1 * (Rat(1) / r1.coeff(0));
        std::vector<Rat> c = inv.coeffs();
        c.resize(static_cast<std::size_t>(fld_->degree()), Rat(0));
        return nf_element(fld_, std::move(c));
    }

    nf_element operator/(const nf_element& o) const { return *this * o.inverse(); }

    // Rational enclosure of the represented real number.
    std::pair<Rat, Rat> enclosure() const {
        if (fld_ == nullptr) return {c_[0], c_[0]};
        return interval_eval(rat_poly(c_), fld_->root.lo(), fld_->root.hi());
    }

    // Exact sign of the represented real number.
    int sign() const {
        if (is_zero()) return 0;
        if (fld_ == nullptr || is_rational()) return sign_of(c_[0]);
        while (true) {
            auto [lo, hi] = enclosure();
            if (lo > 0) return 1;
            if (hi < 0) return -1;
            fld_->root.refine();
        }
    }

    void refine_enclosure_below(const Rat& eps) const {
        if (fld_ == nullptr) return;
        while (true) {
            auto [lo, hi] = enclosure();
            if (hi - lo < eps) return;
            fld_->root.refine();
        }
    }

private:
    static std::tuple<nf_field, std::vector<Rat>, std::vector<Rat>> aligned(const nf_element& x,
                                                                            const nf_element& y) {
        nf_field fld = x.fld_ != nullptr ? x.fld_ : y.fld_;
        if (x.fld_ != nullptr && y.fld_ != nullptr)
            require(x.fld_ == y.fld_ || x.fld_->min_poly == y.fld_->min_poly, errc::check_failed,
                    "elements of different fields");
        std::size_t n = fld == nullptr ? 1 : static_cast<std::size_t>(fld->degree());
        std::vector<Rat> a = x.c_, b = y.c_;
        a.resize(n, Rat(0));
        b.resize(n, Rat(0));
        return {std::move(fld), std::move(a), std::move(b)};
    }

    static nf_element from_aligned(nf_field fld, std::vector<Rat> c) {
        if (fld == nullptr) {
            nf_element r;
            r.c_ = std::move(c);
            return r;
        }
        return nf_element(std::move(fld), std::move(c));
    }

    nf_field fld_;
    std::vector<Rat> c_;
};

inline nf_element operator*(const Rat& s, const nf_element& e) { return nf_element(s) * e; }

using nf_matrix = matrix<nf_element>;
using nf_poly = poly<nf_element>;

inline nf_matrix to_field(const int_matrix& m, const nf_field& fld) {
    nf_matrix r(m.rows(), m.cols(), nf_element::in_field(fld, Rat(0)));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r.at(i, j) = nf_element::in_field(fld, Rat(m.at(i, j)));
    return r;
}

// Reduced row echelon form over Q(lambda); returns pivot columns. Pivots are
// chosen as the topmost non-zero entry of each column, so results are
// reproducible.
inline std::vector<int> nf_rref(nf_matrix& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int sel = -1;
        for (int i = row; i < m.rows(); ++i)
            if (!m.at(i, col).is_zero()) { sel = i; break; }
        if (sel < 0) continue;
        m.swap_rows(sel, row);
        nf_element inv = m.at(row, col).inverse();
        for (int j = col; j < m.cols(); ++j) m.at(row, j) = m.at(row, j) * inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == row || m.at(i, col).is_zero()) continue;
            nf_element f = m.at(i, col);
            for (int j = col; j < m.cols(); ++j) m.at(i, j) = m.at(i, j) - f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

// Kernel basis over Q(lambda), one vector per free column, each normalized so
// its first non-zero coordinate is 1.
inline std::vector<std::vector<nf_element>> nf_kernel(nf_matrix m) {
    const nf_element zero = m.rows() > 0 && m.cols() > 0 ? m.at(0, 0) - m.at(0, 0) : nf_element();
    std::vector<int> pivots = nf_rref(m);
    std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
    for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;
    std::vector<std::vector<nf_element>> basis;
    for (int free = 0; free < m.cols(); ++free) {
        if (is_pivot[static_cast<std::size_t>(free)]) continue;
        std::vector<nf_element> v(static_cast<std::size_t>(m.cols()), zero);
        v[static_cast<std::size_t>(free)] = zero.one_like();
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[static_cast<std::size_t>(pivots[r])] = -m.at(static_cast<int>(r), free);
        for (auto& x : v)
            if (!x.is_zero()) {
                nf_element inv = x.inverse();
                for (auto& y : v) y = y * inv;
                break;
            }
        basis.push_back(std::move(v));
    }
    return basis;
}

// Divides a monic integer polynomial by (x - lambda) over Q(lambda); the
// remainder must vanish, i.e. lambda must be a root.
inline nf_poly deflate_at_root(const int_poly& f, const nf_field& fld) {
    require(!f.is_zero() && f.lead() == 1, errc::not_monic, "deflation needs a monic polynomial");
    int n = f.degree();
    require(n >= 1, errc::check_failed, "deflation needs a non-constant polynomial");
    nf_element lambda = nf_element::generator(fld);
    std::vector<nf_element> g(static_cast<std::size_t>(n));
    nf_element carry = nf_element::in_field(fld, Rat(1));
    g[static_cast<std::size_t>(n - 1)] = carry;
    for (int i = n - 1; i >= 1; --i) {
        carry = nf_element::in_field(fld, Rat(f.coeff(i))) + lambda * carry;
        g[static_cast<std::size_t>(i - 1)] = carry;
    }
    nf_element rem = nf_element::in_field(fld, Rat(f.coeff(0))) + lambda * carry;
    require(rem.is_zero(), errc::check_failed, "deflation at a non-root");
    return nf_poly(std::move(g));
}

// True when e equals the real algebraic number a, decided exactly.
inline bool equals_algebraic(const nf_element& e, const algebraic_number& a) {
    nf_element acc = e.one_like() - e.one_like(); // zero in e's field
    nf_element pw = e.one_like();
    for (int i = 0; i <= a.min_poly().degree(); ++i) {
        acc += nf_element(Rat(a.min_poly().coeff(i))) * pw;
        pw = pw * e;
    }
    if (!acc.is_zero()) return false;
    return (e - nf_element(a.lo())).sign() > 0 && (nf_element(a.hi()) - e).sign() > 0;
}

} // namespace dimforge
