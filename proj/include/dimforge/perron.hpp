#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "dimforge/budget.hpp"
#include "dimforge/factor.hpp"
#include "dimforge/normal_form.hpp"
#include "dimforge/number_field.hpp"

namespace dimforge {

// ---------------------------------------------------------------------------
// Combinatorial primitivity: boolean support powers up to the Wielandt bound.
// ---------------------------------------------------------------------------

struct primitivity_report {
    bool primitive = false;
    std::optional<long long> witness_exponent; // least power with full support
    long long wielandt_bound = 0;              // (n-1)^2 + 1
};

inline primitivity_report is_primitive(const int_matrix& a, const budget& bgt = {}) {
    require(a.is_square(), errc::not_square, "primitivity test");
    int n = a.rows();
    require(n >= 1, errc::dimension_mismatch, "primitivity test of an empty matrix");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            require(a.at(i, j) >= 0, errc::negative_entries, "primitivity test needs a non-negative matrix");

    std::vector<std::vector<char>> base(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) base[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a.at(i, j) > 0 ? 1 : 0;

    auto full = [n](const std::vector<std::vector<char>>& m) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) return false;
        return true;
    };
    auto mul = [n](const std::vector<std::vector<char>>& x, const std::vector<std::vector<char>>& y) {
        std::vector<std::vector<char>> r(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l)
                if (x[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)])
                    for (int j = 0; j < n; ++j)
                        if (y[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)])
                            r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
        return r;
    };

    // A non-negative matrix is primitive iff its support power at the
    // Wielandt exponent (n-1)^2 + 1 is strictly positive.
    primitivity_report rep;
    rep.wielandt_bound = static_cast<long long>(n - 1) * (n - 1) + 1;
    work_meter meter(bgt.ring_ops);
    std::vector<std::vector<char>> cur = base;
    for (long long p = 1; p <= rep.wielandt_bound; ++p) {
        if (full(cur)) {
            rep.primitive = true;
            rep.witness_exponent = p;
            return rep;
        }
        meter.charge(static_cast<std::uint64_t>(n) * n, "support power iteration");
        cur = mul(cur, base);
    }
    return rep;
}

// Least exponent within the budget for which the exact power is entrywise
// strictly positive. Accepts matrices with entries of any sign.
inline std::optional<long long> positivity_witness(const int_matrix& a, const budget& bgt = {}) {
    require(a.is_square(), errc::not_square, "positivity witness");
    require(a.rows() >= 1, errc::dimension_mismatch, "positivity witness of an empty matrix");
    int n = a.rows();
    int_matrix cur = a;
    for (long long p = 1; p <= bgt.positivity_power; ++p) {
        bool pos = true;
        for (int i = 0; i < n && pos; ++i)
            for (int j = 0; j < n && pos; ++j)
                if (cur.at(i, j) <= 0) pos = false;
        if (pos) return p;
        cur = cur * a;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Certified root dominance.
// ---------------------------------------------------------------------------

namespace detail_pf {

// Decides whether every complex root of f has modulus strictly below lam.
// True answers come from a root-squaring bound certificate, false answers
// from exact real-root comparisons, an exact product-of-moduli test, or
// coefficient lower bounds on the squared iterates. Throws budget_exceeded
// when neither side can be certified within the budget.
inline bool dominated_int(const int_poly& f, const algebraic_number& lam_in, const budget& bgt) {
    require(!f.is_zero(), errc::check_failed, "dominance test of the zero polynomial");
    int d = f.degree();
    if (d == 0) return true;

    // Product of root moduli is |c0 / cd|; if it reaches lam^d some root
    // modulus reaches lam.
    {
        Int c0 = abs_int(f.coeff(0));
        Int cd = abs_int(f.lead());
        std::vector<Int> h(static_cast<std::size_t>(d) + 1, Int(0));
        h[0] = -c0;
        h[static_cast<std::size_t>(d)] = cd;
        if (sign_at_algebraic(int_poly(std::move(h)), lam_in) <= 0) return false;
    }

    // Real roots compare exactly.
    algebraic_number neg = lam_in.negated();
    for (const algebraic_number& rho : isolate_real_roots(f)) {
        if (algebraic_number::compare(rho, lam_in) >= 0) return false;
        if (algebraic_number::compare(rho, neg) <= 0) return false;
    }

    algebraic_number lam = lam_in;
    while (!(lam.lo() > 0)) lam.refine();
    int cap = std::min(bgt.m_power, 48);
    lam.refine_below(lam.lo() / pow_int(Int(2), static_cast<unsigned long>(cap) + 3));

    Rat rlo = lam.lo(), rhi = lam.hi();
    int_poly g = f;
    work_meter meter(bgt.ring_ops);
    for (int m = 0;; ++m) {
        if (strictly_bounds_roots(g, rlo)) return true;
        // max root modulus of g is at least |g_{d-1}/g_d|/d and |g_0/g_d|^{1/d}
        Rat lead(abs_int(g.lead()));
        if (make_rat(abs_int(g.coeff(d - 1)), Int(1)) / lead >= Rat(d) * rhi) return false;
        if (make_rat(abs_int(g.coeff(0)), Int(1)) / lead >= pow_rat(rhi, static_cast<unsigned long>(d))) return false;
        if (m >= cap) break;
        g = graeffe_step(g);
        meter.charge(static_cast<std::uint64_t>(d) * d, "root squaring");
        rlo *= rlo;
        rhi *= rhi;
    }
    fail(errc::budget_exceeded, "root dominance certificate did not converge");
}

// Same decision for the conjugates of the field generator, via the deflated
// minimal polynomial over the field itself.
inline bool conjugates_dominated(const nf_field& fld, const budget& bgt) {
    const int_poly& f = fld->min_poly;
    int d = f.degree();
    if (d == 1) return true;

    // Product of the conjugate moduli is |f(0)| / lam.
    {
        std::vector<Int> h(static_cast<std::size_t>(d) + 1, Int(0));
        h[0] = -abs_int(f.coeff(0));
        h[static_cast<std::size_t>(d)] = 1;
        if (sign_at_algebraic(int_poly(std::move(h)), fld->root) <= 0) return false;
    }

    algebraic_number lam = fld->root;
    algebraic_number neg = lam.negated();
    for (const algebraic_number& rho : isolate_real_roots(f)) {
        if (rho.equals(lam)) continue;
        if (algebraic_number::compare(rho, lam) >= 0) return false;
        if (algebraic_number::compare(rho, neg) <= 0) return false;
    }

    int cap = std::min(bgt.m_power, 48);
    while (!(fld->root.lo() > 0)) fld->root.refine();
    fld->root.refine_below(fld->root.lo() / pow_int(Int(2), static_cast<unsigned long>(cap) + 3));

    nf_poly g = deflate_at_root(f, fld);
    int n = g.degree();
    Rat rlo = fld->root.lo(), rhi = fld->root.hi();
    work_meter meter(bgt.ring_ops);
    for (int m = 0;; ++m) {
        // Upper bounds on the coefficient moduli give a sufficient bound
        // certificate; the lead is exactly one.
        Rat lhs(0), pw(1);
        for (int k = 0; k < n; ++k) {
            auto [elo, ehi] = g.coeff(k).enclosure();
            lhs += std::max(Rat(-elo), ehi) * pw;
            pw *= rlo;
        }
        if (lhs < pw) return true;
        // Lower bound on |g_{n-1}| certifies a conjugate of large modulus.
        auto [slo, shi] = g.coeff(n - 1).enclosure();
        Rat away = slo > 0 ? slo : (shi < 0 ? -shi : Rat(0));
        if (away >= Rat(n) * rhi) return false;
        if (m >= cap) break;
        g = graeffe_step(g);
        meter.charge(static_cast<std::uint64_t>(d) * d * d, "conjugate root squaring");
        rlo *= rlo;
        rhi *= rhi;
    }
    fail(errc::budget_exceeded, "conjugate dominance certificate did not converge");
}

} // namespace detail_pf

// ---------------------------------------------------------------------------
// Weak Perron-Frobenius data.
// ---------------------------------------------------------------------------

// Analysis of the largest positive real eigenvalue. The flags are
// independent: multiplicity_one and dominant may fail separately, and the
// eigenvectors are computed whenever the eigenspace is one-dimensional.
struct weak_pf_record {
    algebraic_number lambda;
    int_poly char_polynomial;
    int_poly eigen_factor;               // irreducible factor of lambda
    nf_field field;                      // null when lambda is rational
    bool multiplicity_one = false;
    bool dominant = false;               // strictly exceeds all other root moduli
    std::vector<nf_element> right, left; // eigenvectors, first coordinate one
    bool positive_right = false;
    bool positive_left = false;

    bool eventually_positive() const {
        return multiplicity_one && dominant && positive_right && positive_left;
    }
};

// Certifies the weak Perron-Frobenius structure of an integer matrix of any
// sign pattern. Returns none when the matrix has no positive real eigenvalue;
// otherwise analyses the largest one.
inline std::optional<weak_pf_record> weak_pf_data(const int_matrix& a, const budget& bgt = {}) {
    require(a.is_square(), errc::not_square, "weak Perron-Frobenius analysis");
    require(a.rows() >= 1, errc::dimension_mismatch, "weak Perron-Frobenius analysis of an empty matrix");

    weak_pf_record rep;
    rep.char_polynomial = char_poly(a);
    auto factors = factor_rational(rep.char_polynomial);

    std::vector<std::pair<algebraic_number, std::size_t>> reals;
    for (std::size_t i = 0; i < factors.size(); ++i)
        for (algebraic_number& r : isolate_real_roots(factors[i].first))
            reals.emplace_back(std::move(r), i);
    if (reals.empty()) return std::nullopt;

    std::size_t best = 0;
    for (std::size_t i = 1; i < reals.size(); ++i)
        if (algebraic_number::compare(reals[i].first, reals[best].first) > 0) best = i;
    if (reals[best].first.sign() <= 0) return std::nullopt;

    rep.lambda = reals[best].first;
    std::size_t fi = reals[best].second;
    rep.eigen_factor = factors[fi].first;
    rep.multiplicity_one = factors[fi].second == 1;
    rep.field = rep.eigen_factor.degree() >= 2 ? make_field(rep.lambda) : nullptr;

    rep.dominant = true;
    for (std::size_t j = 0; j < factors.size() && rep.dominant; ++j) {
        if (j == fi) continue;
        if (!detail_pf::dominated_int(factors[j].first, rep.lambda, bgt)) rep.dominant = false;
    }
    if (rep.dominant && rep.field != nullptr && !detail_pf::conjugates_dominated(rep.field, bgt))
        rep.dominant = false;

    if (rep.multiplicity_one) {
        nf_element lam_e = rep.field != nullptr ? nf_element::generator(rep.field)
                                                : nf_element(rep.lambda.rational_value());
        auto eigenvector = [&](const int_matrix& m) {
            nf_matrix s = to_field(m, rep.field);
            for (int i = 0; i < s.rows(); ++i) s.at(i, i) -= lam_e;
            auto ker = nf_kernel(s);
            require(ker.size() == 1, errc::check_failed, "eigenspace of a simple eigenvalue must be one-dimensional");
            return ker.front();
        };
        rep.right = eigenvector(a);
        rep.left = eigenvector(a.transpose());
        auto all_positive = [](const std::vector<nf_element>& v) {
            for (const nf_element& e : v)
                if (e.sign() <= 0) return false;
            return true;
        };
        rep.positive_right = all_positive(rep.right);
        rep.positive_left = all_positive(rep.left);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Field spanning of primitive eigenvector entries.
// ---------------------------------------------------------------------------

struct field_span_report {
    algebraic_number lambda;
    std::vector<nf_element> eigenvector;    // right eigenvector, first coordinate one
    bool spans = false;                     // entries span Q(lambda) over Q
    std::vector<nf_element> representative; // a scaling whose entries span
};

namespace detail_pf {

inline bool entries_span(const std::vector<nf_element>& v, int degree) {
    rat_matrix coords(degree, static_cast<int>(v.size()));
    for (std::size_t j = 0; j < v.size(); ++j) {
        std::vector<Rat> c = v[j].coords();
        for (int i = 0; i < degree; ++i) coords.at(i, static_cast<int>(j)) = c[static_cast<std::size_t>(i)];
    }
    return rank_of(clear_row_denominators(coords)) == degree;
}

} // namespace detail_pf

// For a primitive matrix, checks that the entries of the dominant right
// eigenvector span Q(lambda) as a rational vector space, searching small
// field multiples for a spanning representative when the normalized vector
// itself falls short.
inline field_span_report eigenvector_spans_field(const int_matrix& a, const budget& bgt = {}) {
    // Primitivity in the eventually-positive sense, so matrices with negative
    // entries but a strictly positive power qualify.
    auto rep = weak_pf_data(a, bgt);
    require(rep.has_value() && rep->eventually_positive(), errc::not_primitive,
            "field spanning test needs a primitive matrix");

    field_span_report out;
    out.lambda = rep->lambda;
    out.eigenvector = rep->right;
    int degree = std::max(rep->eigen_factor.degree(), 1);
    out.spans = detail_pf::entries_span(out.eigenvector, degree);
    if (out.spans) {
        out.representative = out.eigenvector;
        return out;
    }

    // Scan multipliers c with small power-basis coordinates for a spanning
    // scaling c*v of the eigenline.
    work_meter meter(bgt.ring_ops);
    std::vector<Int> t(static_cast<std::size_t>(degree), Int(0));
    for (long long radius = 1; radius <= bgt.enum_radius; ++radius) {
        std::function<bool(std::size_t)> scan = [&](std::size_t pos) -> bool {
            if (pos == t.size()) {
                Int peak(0);
                for (const Int& x : t) peak = std::max(peak, abs_int(x));
                if (peak != radius) return false;
                meter.charge(static_cast<std::uint64_t>(degree) * degree, "spanning multiplier scan");
                std::vector<Rat> cc;
                cc.reserve(t.size());
                for (const Int& x : t) cc.emplace_back(x);
                nf_element c = nf_element(rep->field, std::move(cc));
                std::vector<nf_element> scaled;
                scaled.reserve(out.eigenvector.size());
                for (const nf_element& e : out.eigenvector) scaled.push_back(c * e);
                if (detail_pf::entries_span(scaled, degree)) {
                    out.representative = std::move(scaled);
                    return true;
                }
                return false;
            }
            for (Int x(-radius); x <= radius; ++x) {
                t[pos] = x;
                if (scan(pos + 1)) return true;
            }
            return false;
        };
        if (scan(0)) return out;
    }
    fail(errc::defect, "no spanning eigenvector representative within the search radius");
}

// ---------------------------------------------------------------------------
// Induced action on a pure invariant sublattice and its free quotient.
// ---------------------------------------------------------------------------

struct quotient_result {
    int_matrix basis;       // unimodular; leading columns span the sublattice
    int_matrix restriction; // action on the sublattice
    int_matrix quotient;    // induced action on the free quotient
    int_matrix mixing;      // top-right block of the conjugated matrix
};

inline quotient_result induced_quotient(const int_matrix& a, const int_matrix& sub,
                                        const std::optional<int_matrix>& complement = std::nullopt) {
    require(a.is_square(), errc::not_square, "quotient construction");
    require(sub.rows() == a.rows() || sub.cols() == 0, errc::dimension_mismatch, "sublattice lives in the wrong space");
    int k = a.rows();
    int r = sub.cols();
    require(r <= k, errc::dimension_mismatch, "sublattice rank exceeds the dimension");

    if (r > 0) {
        require(same_lattice(sub, saturate(sub)), errc::not_pure, "sublattice is not saturated");
        for (int j = 0; j < r; ++j) {
            std::vector<Int> img(static_cast<std::size_t>(k), Int(0));
            for (int i = 0; i < k; ++i)
                for (int l = 0; l < k; ++l) img[static_cast<std::size_t>(i)] += a.at(i, l) * sub.at(l, j);
            require(solve_integer(sub, img).has_value(), errc::not_invariant,
                    "matrix does not map the sublattice into itself");
        }
    }

    int_matrix t = extend_to_basis(sub, k, complement);
    int_matrix m = unimodular_inverse(t) * a * t;
    for (int i = r; i < k; ++i)
        for (int j = 0; j < r; ++j)
            require(m.at(i, j) == 0, errc::check_failed, "conjugated matrix lost block triangularity");

    quotient_result out;
    out.basis = std::move(t);
    out.restriction = int_matrix(r, r);
    out.quotient = int_matrix(k - r, k - r);
    out.mixing = int_matrix(r, k - r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) out.restriction.at(i, j) = m.at(i, j);
    for (int i = 0; i < k - r; ++i)
        for (int j = 0; j < k - r; ++j) out.quotient.at(i, j) = m.at(r + i, r + j);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < k - r; ++j) out.mixing.at(i, j) = m.at(i, r + j);
    return out;
}

inline int_matrix quotient_matrix(const int_matrix& a, const int_matrix& sub,
                                  const std::optional<int_matrix>& complement = std::nullopt) {
    return induced_quotient(a, sub, complement).quotient;
}

// ---------------------------------------------------------------------------
// Similarity to a primitive matrix.
// ---------------------------------------------------------------------------

enum class similarity_verdict {
    pass,                      // |w.v| >= n, similar to a primitive matrix
    fail,                      // |w.v| < n
    no_weak_pf,                // no simple dominant positive eigenvalue
    not_applicable_irrational, // always similar when lambda is irrational
};

inline const char* similarity_verdict_name(similarity_verdict v) {
    switch (v) {
    case similarity_verdict::pass: return "Pass";
    case similarity_verdict::fail: return "Fail";
    case similarity_verdict::no_weak_pf: return "NoWeakPF";
    case similarity_verdict::not_applicable_irrational: return "NotApplicableIrrational";
    }
    return "Unknown";
}

struct similarity_report {
    similarity_verdict verdict = similarity_verdict::no_weak_pf;
    long long dimension = 0;
    Int pairing = 0;                      // |w.v| for the unimodular vectors
    std::vector<Int> right, left;         // content-one, first non-zero positive
    std::optional<int_matrix> conjugator; // reserved for a future similarity witness
};

namespace detail_pf {

inline std::vector<Int> lowest_terms(const std::vector<nf_element>& v) {
    Int l(1);
    for (const nf_element& e : v) l = l / gcd_int(l, denom(e.coords()[0])) * denom(e.coords()[0]);
    std::vector<Int> out;
    Int g(0);
    for (const nf_element& e : v) {
        out.push_back(numer(e.coords()[0] * Rat(l)));
        g = gcd_int(g, out.back());
    }
    if (g > 1)
        for (Int& x : out) x = div_exact(x, g, "eigenvector content");
    for (const Int& x : out) {
        if (x == 0) continue;
        if (x < 0)
            for (Int& y : out) y = -y;
        break;
    }
    return out;
}

} // namespace detail_pf

// Necessary test for similarity to a primitive matrix: over a rational
// dominant eigenvalue the unimodular left/right eigenvectors must pair with
// modulus at least the dimension. Irrational dominant eigenvalues always
// admit a primitive model. Finding the conjugating matrix is out of scope.
inline similarity_report similarity_to_primitive_check(const int_matrix& a, const budget& bgt = {}) {
    similarity_report out;
    out.dimension = a.rows();
    auto rep = weak_pf_data(a, bgt);
    if (!rep.has_value() || !rep->multiplicity_one || !rep->dominant) {
        out.verdict = similarity_verdict::no_weak_pf;
        return out;
    }
    if (rep->field != nullptr) {
        out.verdict = similarity_verdict::not_applicable_irrational;
        return out;
    }
    out.right = detail_pf::lowest_terms(rep->right);
    out.left = detail_pf::lowest_terms(rep->left);
    Int dot(0);
    for (std::size_t i = 0; i < out.right.size(); ++i) dot += out.left[i] * out.right[i];
    out.pairing = abs_int(dot);
    out.verdict = out.pairing >= a.rows() ? similarity_verdict::pass : similarity_verdict::fail;
    return out;
}

} // namespace dimforge
