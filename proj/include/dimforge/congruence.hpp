#pragma once

#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "dimforge/budget.hpp"
#include "dimforge/error.hpp"
#include "dimforge/factor.hpp"
#include "dimforge/integer.hpp"
#include "dimforge/matrix.hpp"
#include "dimforge/normal_form.hpp"
#include "dimforge/poly.hpp"

namespace dimforge {

// The monic polynomial whose roots are the l-th powers of the roots of f.
inline int_poly power_map_poly(const int_poly& f, int l) {
    require(f.is_monic(), errc::not_monic, "power map needs a monic polynomial");
    require(l >= 0, errc::check_failed, "power map exponent must be non-negative");
    if (f.degree() == 0) return f;
    return char_poly(f.companion().pow(static_cast<unsigned long>(l)));
}

// Witness for f*g + m*r = x^k - x^l with k > l >= 0.
struct congruence_certificate {
    long long k = 0;
    long long l = 0;
    int_poly g;
    int_poly r;
};

// One stage of the constructive derivation; l == 0 marks the final stage,
// where the constant term is coprime to the modulus and k0 is the
// multiplicative order of x in (Z/m)[x]/(f).
struct induction_stage {
    int_poly f;
    int j0 = 0;
    int l = 0;
    Int m_prime;
    Int c;
    long long order = 0;
};

struct poly_identity_result {
    congruence_certificate minimal;      // from the residue-cycle engine
    congruence_certificate constructive; // from the inductive derivation
    std::vector<induction_stage> stages;
};

namespace detail_cong {

using residue = std::vector<Int>;

inline residue residue_one(const int_poly& f, const Int& m) {
    residue r(static_cast<std::size_t>(f.degree()), Int(0));
    if (!r.empty()) r[0] = mod_floor(Int(1), m);
    return r;
}

inline void mul_x_inplace(residue& r, const int_poly& f, const Int& m) {
    if (r.empty()) return;
    Int carry = r.back();
    for (std::size_t i = r.size(); i-- > 1;) r[i] = r[i - 1];
    r[0] = 0;
    if (carry != 0)
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] = mod_floor(r[i] - carry * f.coeffs()[i], m);
}

inline bool fits_poly_degree(long long k) { return k < (std::numeric_limits<int>::max)() / 4; }

// Divides (x^k - x^l) by monic f modulo m and lifts the exact witness pair.
inline congruence_certificate make_certificate(const int_poly& f, const Int& m, long long k, long long l) {
    require(fits_poly_degree(k), errc::budget_exceeded, "congruence exponent too large for a certificate");
    int_poly target = int_poly::x_power(static_cast<int>(k)) - int_poly::x_power(static_cast<int>(l));
    auto [g, rem] = detail_hensel::divmod_monic_mod(target, f, m);
    require(rem.is_zero(), errc::check_failed, "congruence certificate division has a remainder");
    int_poly scaled = target - f * g;
    std::vector<Int> rc = scaled.coeffs();
    for (Int& c : rc) c = div_exact(c, m, "congruence certificate lift");
    congruence_certificate cert;
    cert.k = k;
    cert.l = l;
    cert.g = std::move(g);
    cert.r = int_poly(std::move(rc));
    return cert;
}

inline void verify_certificate(const int_poly& f, const Int& m, const congruence_certificate& c) {
    require(c.k > c.l && c.l >= 0, errc::check_failed, "congruence exponents out of order");
    require(fits_poly_degree(c.k), errc::budget_exceeded, "congruence exponent too large to verify");
    int_poly lhs = f * c.g + c.r * m;
    int_poly rhs = int_poly::x_power(static_cast<int>(c.k)) - int_poly::x_power(static_cast<int>(c.l));
    require(lhs == rhs, errc::check_failed, "congruence certificate does not verify");
}

// Paper-facing coefficient indexing: a_j is the coefficient of x^(n-j).
// j0 is the largest j with gcd(a_j, ..., a_n, m) = 1.
inline int trailing_coprime_index(const int_poly& f, const Int& m) {
    int n = f.degree();
    Int g = m;
    int j0 = 0;
    for (int j = n; j >= 0; --j) {
        g = gcd_int(g, f.coeff(n - j));
        if (g == 1) {
            j0 = j;
            break;
        }
    }
    return j0;
}

// Multiplicative order of x in (Z/m)[x]/(f) for f with constant term coprime
// to m.
inline long long order_of_x(const int_poly& f, const Int& m, work_meter& meter) {
    residue one = residue_one(f, m);
    residue cur = one;
    long long i = 0;
    do {
        mul_x_inplace(cur, f, m);
        ++i;
        meter.charge(1, "order of x modulo (f, m)");
    } while (cur != one);
    return i;
}

inline congruence_certificate constructive_engine(const int_poly& f, const Int& m, work_meter& meter,
                                                  std::vector<induction_stage>& stages) {
    induction_stage stage;
    stage.f = f;
    stage.j0 = trailing_coprime_index(f, m);
    Int f0 = f.degree() >= 1 ? f.coeff(0) : Int(1);
    if (gcd_int(f0, m) == 1) {
        stage.l = 0;
        stage.m_prime = m;
        stage.c = 0;
        stage.order = order_of_x(f, m, meter);
        long long k = stage.order;
        stages.push_back(std::move(stage));
        return make_certificate(f, m, k, 0);
    }

    // Pick the smallest power of the constant term that absorbs every common
    // prime factor with m.
    int li = 0;
    Int t_abs(1), m_prime;
    const Int f0_abs = abs_int(f0);
    for (int l = 1;; ++l) {
        meter.charge(1, "constant term power search");
        t_abs *= f0_abs;
        m_prime = div_exact(m, gcd_int(t_abs, m), "modulus split");
        if (gcd_int(t_abs, m_prime) == 1) {
            li = l;
            break;
        }
    }
    int_poly fl = power_map_poly(f, li);
    Int t = fl.coeff(0);
    Int c = div_exact(m_prime * t, m, "integer stage constant");
    int_poly shifted = int_poly{Int(-m_prime), Int(1)} * fl + int_poly::constant(m_prime * t);
    int_poly f_next = shifted.shift_down(1);
    require(f_next.degree() == f.degree() && f_next.is_monic(), errc::check_failed,
            "induction stage lost degree or monicity");

    stage.l = li;
    stage.m_prime = m_prime;
    stage.c = c;
    stages.push_back(std::move(stage));

    congruence_certificate inner = constructive_engine(f_next, m, meter, stages);

    // Unwind x -> x^li and multiply by x^li:
    //   f*(gi*G(x^li)) + m*(c*G(x^li) + x^li*R(x^li)) = x^(li(K+1)) - x^(li(L+1)).
    long long k = static_cast<long long>(li) * (inner.k + 1);
    long long l_out = static_cast<long long>(li) * (inner.l + 1);
    require(fits_poly_degree(k), errc::budget_exceeded, "unwound congruence exponent too large");
    int_poly h = div_exact_poly(fl.compose_power(li), f);
    int_poly gi = (int_poly::x_power(li) - int_poly::constant(m_prime)) * h;
    int_poly g_sub = inner.g.compose_power(li);
    congruence_certificate cert;
    cert.k = k;
    cert.l = l_out;
    cert.g = gi * g_sub;
    cert.r = g_sub * c + inner.r.compose_power(li).shift_up(li);
    return cert;
}

} // namespace detail_cong

// Produces two independent witnesses for f*g + m*r = x^k - x^l: the minimal
// pair found by cycling residues of x^i in (Z/m)[x]/(f), and the pair built
// by the constructive induction on the trailing coefficients. Both are
// re-verified as exact polynomial identities.
inline poly_identity_result poly_identity(const int_poly& f, const Int& m, const budget& bgt = budget{}) {
    require(m >= 2, errc::invalid_modulus, "modulus must be at least 2");
    require(!f.is_zero() && f.is_monic(), errc::not_monic, "identity needs a monic polynomial");
    work_meter meter(bgt.ring_ops);

    poly_identity_result out;

    // Engine (i): first repeated residue gives the lexicographically minimal
    // valid pair.
    {
        std::map<detail_cong::residue, long long> seen;
        detail_cong::residue cur = detail_cong::residue_one(f, m);
        long long i = 0;
        seen.emplace(cur, 0);
        while (true) {
            detail_cong::mul_x_inplace(cur, f, m);
            ++i;
            meter.charge(1, "residue cycle search");
            auto [it, fresh] = seen.emplace(cur, i);
            if (!fresh) {
                out.minimal = detail_cong::make_certificate(f, m, i, it->second);
                break;
            }
        }
    }

    // Engine (ii): constructive induction.
    out.constructive = detail_cong::constructive_engine(f, m, meter, out.stages);

    detail_cong::verify_certificate(f, m, out.minimal);
    detail_cong::verify_certificate(f, m, out.constructive);
    return out;
}

struct matrix_congruence_result {
    long long k = 0; // minimal pair from the matrix residue cycle
    long long l = 0;
    poly_identity_result identity; // via the characteristic polynomial
};

namespace detail_cong {

inline int_matrix mod_matrix(const int_matrix& a, const Int& m) {
    int_matrix r = a;
    for (int i = 0; i < r.rows(); ++i)
        for (int j = 0; j < r.cols(); ++j) r.at(i, j) = mod_floor(r.at(i, j), m);
    return r;
}

inline int_matrix matpow_mod(const int_matrix& b, long long e, const Int& m) {
    int_matrix r = int_matrix::identity(b.rows());
    int_matrix base = mod_matrix(b, m);
    while (e > 0) {
        if (e & 1) r = mod_matrix(r * base, m);
        base = mod_matrix(base * base, m);
        e >>= 1;
    }
    return r;
}

} // namespace detail_cong

// Minimal k > l >= 0 with B^k = B^l modulo m, plus the polynomial witnesses
// for the characteristic polynomial of B. Both routes are verified with an
// independent modular power computation.
inline matrix_congruence_result matrix_power_congruence(const int_matrix& b, const Int& m,
                                                        const budget& bgt = budget{}) {
    require(b.is_square(), errc::not_square, "matrix power congruence");
    require(m >= 2, errc::invalid_modulus, "modulus must be at least 2");
    require(b.rows() >= 1, errc::dimension_mismatch, "matrix power congruence needs a non-empty matrix");
    work_meter meter(bgt.ring_ops);

    matrix_congruence_result out;
    {
        std::map<std::vector<Int>, long long> seen;
        int_matrix cur = int_matrix::identity(b.rows());
        long long i = 0;
        seen.emplace(cur.data(), 0);
        while (true) {
            cur = detail_cong::mod_matrix(cur * b, m);
            ++i;
            meter.charge(1, "matrix residue cycle search");
            auto [it, fresh] = seen.emplace(cur.data(), i);
            if (!fresh) {
                out.k = i;
                out.l = it->second;
                break;
            }
        }
    }

    out.identity = poly_identity(char_poly(b), m, bgt);

    require(detail_cong::matpow_mod(b, out.k, m) == detail_cong::matpow_mod(b, out.l, m), errc::check_failed,
            "matrix congruence does not verify");
    require(detail_cong::matpow_mod(b, out.identity.minimal.k, m) ==
                detail_cong::matpow_mod(b, out.identity.minimal.l, m),
            errc::check_failed, "polynomial route congruence does not verify");
    require(detail_cong::matpow_mod(b, out.identity.constructive.k, m) ==
                detail_cong::matpow_mod(b, out.identity.constructive.l, m),
            errc::check_failed, "constructive route congruence does not verify");
    return out;
}

// Path-count congruence for a directed graph given by a non-negative
// adjacency matrix: counts of k-step and l-step paths agree modulo m for
// every vertex pair.
inline matrix_congruence_result path_count_congruence(const int_matrix& adjacency, const Int& m,
                                                      const budget& bgt = budget{}) {
    for (int i = 0; i < adjacency.rows(); ++i)
        for (int j = 0; j < adjacency.cols(); ++j)
            require(adjacency.at(i, j) >= 0, errc::negative_entries,
                    "adjacency matrix must be non-negative");
    return matrix_power_congruence(adjacency, m, bgt);
}

} // namespace dimforge
