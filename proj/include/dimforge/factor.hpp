#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "dimforge/error.hpp"
#include "dimforge/integer.hpp"
#include "dimforge/poly.hpp"

namespace dimforge {
namespace detail_fp {

// Dense polynomials over F_p for a small prime p (word-sized).
using fp_poly = std::vector<long long>;

inline void fp_normalize(fp_poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline long long fp_pow(long long a, long long e, long long p) {
    long long r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return r;
}

inline long long fp_inv(long long a, long long p) { return fp_pow((a % p + p) % p, p - 2, p); }

inline fp_poly fp_mul(const fp_poly& a, const fp_poly& b, long long p) {
    if (a.empty() || b.empty()) return {};
    fp_poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    fp_normalize(r);
    return r;
}

inline fp_poly fp_sub(fp_poly a, const fp_poly& b, long long p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = ((a[i] - b[i]) % p + p) % p;
    fp_normalize(a);
    return a;
}

// Quotient and remainder of a by b; b must have an invertible lead.
inline std::pair<fp_poly, fp_poly> fp_divmod(fp_poly a, const fp_poly& b, long long p) {
    fp_poly q;
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, 0);
    long long inv = fp_inv(b.back(), p);
    while (a.size() >= b.size()) {
        long long c = a.back() * inv % p;
        std::size_t off = a.size() - b.size();
        q[off] = c;
        if (c)
            for (std::size_t i = 0; i < b.size(); ++i) a[off + i] = ((a[off + i] - c * b[i]) % p + p) % p;
        a.pop_back();
        while (!a.empty() && a.back() == 0) a.pop_back();
    }
    fp_normalize(q);
    return {std::move(q), std::move(a)};
}

inline fp_poly fp_rem(fp_poly a, const fp_poly& b, long long p) { return fp_divmod(std::move(a), b, p).second; }

inline fp_poly fp_monic(fp_poly f, long long p) {
    if (f.empty()) return f;
    long long inv = fp_inv(f.back(), p);
    for (auto& c : f) c = c * inv % p;
    return f;
}

inline fp_poly fp_gcd(fp_poly a, fp_poly b, long long p) {
    while (!b.empty()) {
        fp_poly r = fp_rem(std::move(a), b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return fp_monic(std::move(a), p);
}

// s*a + t*b = 1 for coprime a, b; returns (s, t) with deg s < deg b, deg t < deg a.
inline std::pair<fp_poly, fp_poly> fp_ext_gcd_coprime(const fp_poly& a, const fp_poly& b, long long p) {
    fp_poly r0 = a, r1 = b;
    fp_poly s0{1}, s1{};
    fp_poly t0{}, t1{1};
    while (!r1.empty()) {
        auto [q, r2] = fp_divmod(r0, r1, p);
        fp_poly s2 = fp_sub(s0, fp_mul(q, s1, p), p);
        fp_poly t2 = fp_sub(t0, fp_mul(q, t1, p), p);
        r0 = std::move(r1); r1 = std::move(r2);
        s0 = std::move(s1); s1 = std::move(s2);
        t0 = std::move(t1); t1 = std::move(t2);
    }
    require(r0.size() == 1, errc::check_failed, "factors not coprime in hensel setup");
    long long inv = fp_inv(r0[0], p);
    for (auto& c : s0) c = c * inv % p;
    for (auto& c : t0) c = c * inv % p;
    return {std::move(s0), std::move(t0)};
}

inline fp_poly fp_deriv(const fp_poly& f, long long p) {
    if (f.size() < 2) return {};
    fp_poly r(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i) r[i - 1] = f[i] * (static_cast<long long>(i) % p) % p;
    fp_normalize(r);
    return r;
}

inline fp_poly fp_powmod_x(long long e, const fp_poly& f, long long p) {
    fp_poly r{1};
    fp_poly b = fp_rem({0, 1}, f, p);
    while (e) {
        if (e & 1) r = fp_rem(fp_mul(r, b, p), f, p);
        b = fp_rem(fp_mul(b, b, p), f, p);
        e >>= 1;
    }
    return r;
}

inline fp_poly reduce_mod_p(const int_poly& f, long long p) {
    fp_poly r(f.coeffs().size());
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = static_cast<long long>(mod_floor(f.coeffs()[i], Int(p)));
    fp_normalize(r);
    return r;
}

// Berlekamp factorization of a monic squarefree polynomial mod p.
// Deterministic: kernel vectors and shifts are scanned in a fixed order.
inline std::vector<fp_poly> berlekamp(const fp_poly& f, long long p) {
    int n = static_cast<int>(f.size()) - 1;
    if (n <= 1) return {fp_monic(f, p)};
    // Frobenius matrix: column i holds x^{p*i} mod f.
    std::vector<fp_poly> xpow(static_cast<std::size_t>(n));
    xpow[0] = {1};
    fp_poly xp = fp_powmod_x(p, f, p);
    for (int i = 1; i < n; ++i)
        xpow[static_cast<std::size_t>(i)] = fp_rem(fp_mul(xpow[static_cast<std::size_t>(i - 1)], xp, p), f, p);
    std::vector<std::vector<long long>> m(static_cast<std::size_t>(n),
                                          std::vector<long long>(static_cast<std::size_t>(n), 0));
    for (int col = 0; col < n; ++col) {
        const fp_poly& c = xpow[static_cast<std::size_t>(col)];
        for (int row = 0; row < n; ++row) {
            long long v = row < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(row)] : 0;
            if (row == col) v = ((v - 1) % p + p) % p;
            m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] = v;
        }
    }
    // Kernel of (Q - I) over F_p; its dimension equals the factor count.
    std::vector<int> pivot_col_of_row;
    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    int r = 0;
    for (int c = 0; c < n && r < n; ++c) {
        int sel = -1;
        for (int i = r; i < n; ++i)
            if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]) { sel = i; break; }
        if (sel < 0) continue;
        std::swap(m[static_cast<std::size_t>(sel)], m[static_cast<std::size_t>(r)]);
        long long inv = fp_inv(m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)], p);
        for (int j = 0; j < n; ++j)
            m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] =
                m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] * inv % p;
        for (int i = 0; i < n; ++i) {
            if (i == r) continue;
            long long fct = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
            if (!fct) continue;
            for (int j = 0; j < n; ++j)
                m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    ((m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                      fct * m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)]) % p + p) % p;
        }
        pivot_col_of_row.push_back(c);
        is_pivot[static_cast<std::size_t>(c)] = true;
        ++r;
    }
    std::vector<fp_poly> kernel;
    for (int c = 0; c < n; ++c) {
        if (is_pivot[static_cast<std::size_t>(c)]) continue;
        fp_poly v(static_cast<std::size_t>(n), 0);
        v[static_cast<std::size_t>(c)] = 1;
        for (int i = 0; i < static_cast<int>(pivot_col_of_row.size()); ++i)
            v[static_cast<std::size_t>(pivot_col_of_row[static_cast<std::size_t>(i)])] =
                ((-m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]) % p + p) % p;
        fp_normalize(v);
        kernel.push_back(std::move(v));
    }
    std::size_t want = kernel.size();
    std::vector<fp_poly> factors{fp_monic(f, p)};
    for (const fp_poly& v : kernel) {
        if (factors.size() >= want) break;
        for (long long s = 0; s < p && factors.size() < want; ++s) {
            fp_poly shifted = v.empty() ? fp_poly{0} : v;
            shifted[0] = ((shifted[0] - s) % p + p) % p;
            fp_normalize(shifted);
            for (std::size_t i = 0; i < factors.size(); ++i) {
                if (factors[i].size() <= 2) continue;
                fp_poly d = fp_gcd(factors[i], shifted, p);
                if (d.size() > 1 && d.size() < factors[i].size()) {
                    fp_poly q = fp_monic(fp_divmod(factors[i], d, p).first, p);
                    factors[i] = std::move(d);
                    factors.push_back(std::move(q));
                }
            }
        }
    }
    require(factors.size() == want, errc::check_failed, "berlekamp split incomplete");
    std::sort(factors.begin(), factors.end());
    return factors;
}

} // namespace detail_fp

namespace detail_hensel {

inline int_poly sym_reduce(const int_poly& f, const Int& m) {
    std::vector<Int> c = f.coeffs();
    for (Int& x : c) x = mod_symmetric(x, m);
    return int_poly(std::move(c));
}

inline int_poly lift_fp(const detail_fp::fp_poly& f, long long p) {
    std::vector<Int> c(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) c[i] = mod_symmetric(Int(f[i]), Int(p));
    return int_poly(std::move(c));
}

// Quotient and remainder modulo m by a monic divisor, symmetric residues.
inline std::pair<int_poly, int_poly> divmod_monic_mod(const int_poly& a, const int_poly& b, const Int& m) {
    require(!b.is_zero() && b.lead() == 1, errc::not_monic, "modular division needs a monic divisor");
    std::vector<Int> rem = a.coeffs();
    int db = b.degree();
    std::vector<Int> quot;
    if (static_cast<int>(rem.size()) - 1 >= db) quot.assign(rem.size() - static_cast<std::size_t>(db), Int(0));
    for (int i = static_cast<int>(rem.size()) - 1; i >= db; --i) {
        Int c = mod_symmetric(rem[static_cast<std::size_t>(i)], m);
        quot[static_cast<std::size_t>(i - db)] = c;
        if (c != 0)
            for (int j = 0; j <= db; ++j)
                rem[static_cast<std::size_t>(i - db + j)] =
                    mod_symmetric(rem[static_cast<std::size_t>(i - db + j)] - c * b.coeffs()[static_cast<std::size_t>(j)], m);
        rem[static_cast<std::size_t>(i)] = 0;
    }
    for (Int& x : rem) x = mod_symmetric(x, m);
    return {int_poly(std::move(quot)), int_poly(std::move(rem))};
}

// One quadratic lifting step: from a factorization valid mod m to one valid
// mod m^2, preserving monic h and the Bezout pair (s, t).
inline void hensel_step(const int_poly& f, int_poly& g, int_poly& h, int_poly& s, int_poly& t, const Int& m) {
    Int m2 = m * m;
    int_poly e = sym_reduce(f - g * h, m2);
    auto [q, r] = divmod_monic_mod(sym_reduce(s * e, m2), h, m2);
    int_poly g1 = sym_reduce(g + t * e + q * g, m2);
    int_poly h1 = sym_reduce(h + r, m2);
    int_poly b = sym_reduce(s * g1 + t * h1 - int_poly::constant(Int(1)), m2);
    auto [c, d] = divmod_monic_mod(sym_reduce(s * b, m2), h1, m2);
    s = sym_reduce(s - d, m2);
    t = sym_reduce(t - t * b - c * g1, m2);
    g = std::move(g1);
    h = std::move(h1);
}

// Lifts f = prod(mods) from mod p to mod target (monic f, pairwise coprime
// monic modular factors), recursing on a balanced product tree.
inline void tree_lift(const int_poly& f, const std::vector<detail_fp::fp_poly>& mods,
                      std::size_t lo, std::size_t hi, long long p, const Int& target,
                      std::vector<int_poly>& out) {
    if (hi - lo == 1) {
        out.push_back(f);
        return;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    detail_fp::fp_poly gp{1}, hp{1};
    for (std::size_t i = lo; i < mid; ++i) gp = detail_fp::fp_mul(gp, mods[i], p);
    for (std::size_t i = mid; i < hi; ++i) hp = detail_fp::fp_mul(hp, mods[i], p);
    auto [sp, tp] = detail_fp::fp_ext_gcd_coprime(gp, hp, p);
    int_poly g = lift_fp(gp, p);
    int_poly h = lift_fp(hp, p);
    int_poly s = lift_fp(sp, p);
    int_poly t = lift_fp(tp, p);
    Int m(p);
    while (m < target) {
        hensel_step(f, g, h, s, t, m);
        m *= m;
    }
    tree_lift(sym_reduce(g, m), mods, lo, mid, p, target, out);
    tree_lift(sym_reduce(h, m), mods, mid, hi, p, target, out);
}

inline std::pair<int_poly, int_poly> divmod_monic_z(const int_poly& a, const int_poly& b) {
    std::vector<Int> rem = a.coeffs();
    int db = b.degree();
    std::vector<Int> quot;
    if (static_cast<int>(rem.size()) - 1 >= db) quot.assign(rem.size() - static_cast<std::size_t>(db), Int(0));
    for (int i = static_cast<int>(rem.size()) - 1; i >= db; --i) {
        Int c = rem[static_cast<std::size_t>(i)];
        quot[static_cast<std::size_t>(i - db)] = c;
        if (c != 0)
            for (int j = 0; j <= db; ++j)
                rem[static_cast<std::size_t>(i - db + j)] -= c * b.coeffs()[static_cast<std::size_t>(j)];
    }
    return {int_poly(std::move(quot)), int_poly(std::move(rem))};
}

} // namespace detail_hensel

namespace detail_factor {

inline bool is_small_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline Int max_abs_coeff(const int_poly& f) {
    Int m(0);
    for (const Int& c : f.coeffs()) m = std::max(m, abs_int(c));
    return m;
}

// Deterministic total order: by degree, then coefficients from the constant up.
inline bool poly_less(const int_poly& a, const int_poly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (int i = 0; i <= a.degree(); ++i) {
        const Int& ca = a.coeff(i);
        const Int& cb = b.coeff(i);
        if (ca != cb) return ca < cb;
    }
    return false;
}

// Factor a monic squarefree polynomial over Z into monic irreducibles.
inline std::vector<int_poly> factor_monic_squarefree(const int_poly& f) {
    int n = f.degree();
    if (n <= 1) return {f};

    long long p = 0;
    for (long long cand = 2; cand < 10000; ++cand) {
        if (!is_small_prime(cand)) continue;
        detail_fp::fp_poly fp = detail_fp::reduce_mod_p(f, cand);
        if (static_cast<int>(fp.size()) - 1 != n) continue;
        detail_fp::fp_poly g = detail_fp::fp_gcd(fp, detail_fp::fp_deriv(fp, cand), cand);
        if (g.size() == 1) { p = cand; break; }
    }
    require(p != 0, errc::check_failed, "no squarefree reduction prime found");

    std::vector<detail_fp::fp_poly> mods = detail_fp::berlekamp(detail_fp::reduce_mod_p(f, p), p);
    if (mods.size() == 1) return {f};

    // Coefficient bound for monic factors, deliberately loose.
    Int bound = (Int(n) + 1) * (Int(1) << static_cast<unsigned>(n)) * max_abs_coeff(f);
    Int target = 2 * bound + 1;
    Int modulus(p);
    while (modulus < target) modulus *= modulus;

    std::vector<int_poly> lifted;
    detail_hensel::tree_lift(detail_hensel::sym_reduce(f, modulus), mods, 0, mods.size(), p, target, lifted);
    for (const int_poly& g : lifted)
        require(g.degree() >= 1 && g.lead() == 1, errc::check_failed, "hensel lift produced a non-monic factor");

    // Subset recombination against the true factorization over Z.
    std::vector<int_poly> result;
    std::vector<std::size_t> active(lifted.size());
    for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;
    int_poly rem_f = f;
    std::size_t d = 1;
    while (2 * d <= active.size()) {
        bool hit = false;
        std::vector<std::size_t> idx(d);
        for (std::size_t i = 0; i < d; ++i) idx[i] = i;
        while (true) {
            int_poly cand = int_poly::constant(Int(1));
            for (std::size_t i : idx) cand = detail_hensel::sym_reduce(cand * lifted[active[i]], modulus);
            auto [q, r] = detail_hensel::divmod_monic_z(rem_f, cand);
            if (r.is_zero()) {
                result.push_back(cand);
                rem_f = q;
                std::vector<std::size_t> next_active;
                for (std::size_t i = 0, k = 0; i < active.size(); ++i) {
                    if (k < d && idx[k] == i) { ++k; continue; }
                    next_active.push_back(active[i]);
                }
                active = std::move(next_active);
                hit = true;
                break;
            }
            // Next lexicographic d-subset of active indices.
            std::size_t j = d;
            while (j > 0 && idx[j - 1] == active.size() - d + (j - 1)) --j;
            if (j == 0) break;
            ++idx[j - 1];
            for (std::size_t i = j; i < d; ++i) idx[i] = idx[i - 1] + 1;
        }
        if (!hit) ++d;
    }
    if (rem_f.degree() >= 1) result.push_back(rem_f);
    std::sort(result.begin(), result.end(), poly_less);
    return result;
}

// Factor a primitive squarefree polynomial with positive lead; handles
// non-monic input through the classic monic substitution y = lead * x.
inline std::vector<int_poly> factor_squarefree(const int_poly& g) {
    if (g.degree() <= 1) return {g};
    const Int lc = g.lead();
    if (lc == 1) return factor_monic_squarefree(g);

    int n = g.degree();
    std::vector<Int> c(static_cast<std::size_t>(n) + 1);
    c[static_cast<std::size_t>(n)] = 1;
    for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = g.coeff(i) * pow_int(lc, n - 1 - i);
    std::vector<int_poly> monic_factors = factor_monic_squarefree(int_poly(std::move(c)));

    std::vector<int_poly> out;
    for (const int_poly& fm : monic_factors) {
        std::vector<Int> b(fm.coeffs());
        Int scale(1);
        for (std::size_t i = 1; i < b.size(); ++i) {
            scale *= lc;
            b[i] *= scale;
        }
        out.push_back(primitive_part(int_poly(std::move(b))));
    }
    std::sort(out.begin(), out.end(), poly_less);
    return out;
}

} // namespace detail_factor

// Irreducible factorization over Q, returned as primitive integer polynomials
// with positive leads, sorted by degree then coefficients; multiplicities
// aggregate repeated factors. Content and sign are dropped.
inline std::vector<std::pair<int_poly, int>> factor_rational(const int_poly& p) {
    require(!p.is_zero(), errc::check_failed, "cannot factor the zero polynomial");
    if (p.degree() == 0) return {};
    std::vector<std::pair<int_poly, int>> out;
    for (const auto& [g, e] : squarefree_decomposition(primitive_part(p)))
        for (const int_poly& f : detail_factor::factor_squarefree(g))
            out.emplace_back(f, e);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (detail_factor::poly_less(a.first, b.first)) return true;
        if (detail_factor::poly_less(b.first, a.first)) return false;
        return a.second < b.second;
    });
    return out;
}

inline bool is_irreducible(const int_poly& p) {
    if (p.degree() < 1) return false;
    auto f = factor_rational(p);
    return f.size() == 1 && f[0].second == 1;
}

} // namespace dimforge
