// Decomposition of a primitive integer matrix into its ordered part, its
// trace-kernel part and brace data: the reverse of the realization pipeline.
#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dimforge/budget.hpp"
#include "dimforge/error.hpp"
#include "dimforge/integer.hpp"
#include "dimforge/matrix.hpp"
#include "dimforge/normal_form.hpp"
#include "dimforge/number_field.hpp"
#include "dimforge/perron.hpp"
#include "dimforge/realize.hpp"

namespace dimforge {

// Optional overrides reproducing a fixed presentation. Each pin is validated
// against the canonically computed object before it replaces it.
struct decomposition_pins {
    std::optional<int_matrix> l_basis; // alternative basis of the trace kernel (columns)
    std::optional<int_matrix> f_basis; // alternative basis of the ordered part (columns)
    std::optional<int_matrix> braces;  // explicit brace columns
};

// Stage-one coordinates of a lattice vector: the least multiple landing in
// F + L, its split over the two bases, and the embedded coordinates.
struct theta_row {
    Int multiple = 1;        // least positive integer mapping the vector into F + L
    std::vector<Rat> f_part; // coordinates over the F basis
    std::vector<Rat> l_part; // coordinates over the L basis
    std::vector<Rat> tau;    // ordered coordinate, power-basis rationals
    std::vector<Rat> phi;    // unordered coordinates
};

struct decomposition_result {
    int_matrix a;
    algebraic_number lambda;
    int_poly min_poly;
    int degree = 1;
    bool cyclic = false;

    rat_matrix w_coords; // degree x k left-eigenvector entries over the power basis
    int_matrix l_basis;  // k x (k - degree), saturated, orthogonal to every w row
    int_matrix f_basis;  // k x degree, saturated, invariant
    int_matrix a_on_l;
    int_matrix a_on_f;

    long long stabilization_e = 1; // least e with rank(M^e) = rank(M^2e) for M = a_on_l
    int stable_rank = 0;           // rank of the stabilized action
    int_matrix l_kernel;           // kernel of M^e in L coordinates
    int_matrix image_basis;        // basis of the image lattice of M^e in L coordinates
    int_matrix k_invertible;       // action on the image basis, non-singular
    rat_matrix phi_map;            // stage-one unordered coordinates of L

    int_matrix braces; // k x s
    bool braces_from_kernel = false;

    long long stabilization_n = 1; // first index where the A^i lattice chain stabilizes
    Int stable_index = 1;          // index of the stable lattice in Z^k
    bool stage_one_generation = false;
    long long generation_power = 0; // exponent certifying generation after pushing

    std::vector<theta_row> embedding; // one row per standard basis vector
    std::vector<theta_row> brace_embedding;
    similarity_report ordered_similarity; // primitivity outlook for a_on_f
    std::vector<std::string> notes;
};

namespace detail_dc {

// Coordinates of a column vector over an integer basis; fails when the vector
// leaves the spanned lattice.
inline std::vector<Int> lattice_coords(const int_matrix& basis, const std::vector<Int>& v,
                                       errc code, const char* what) {
    auto sol = solve_integer(basis, v);
    require(sol.has_value(), code, what);
    return *sol;
}

inline int_matrix action_matrix(const int_matrix& a, const int_matrix& basis, const char* what) {
    int_matrix act(basis.cols(), basis.cols());
    for (int j = 0; j < basis.cols(); ++j) {
        std::vector<Int> c = lattice_coords(basis, a.apply(basis.column(j)), errc::not_invariant, what);
        for (int i = 0; i < basis.cols(); ++i) act.at(i, j) = c[static_cast<std::size_t>(i)];
    }
    return act;
}

inline bool lattice_contains(const int_matrix& gens, const int_matrix& vectors) {
    if (vectors.cols() == 0) return true;
    int_matrix joint = gens.cols() == 0 ? vectors : int_matrix::hcat(gens, vectors);
    if (gens.cols() == 0) return false;
    return same_lattice(lattice_basis(joint), lattice_basis(gens));
}

inline std::vector<Rat> to_rat_vector(const std::vector<Int>& v) {
    std::vector<Rat> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
    return out;
}

} // namespace detail_dc

// Splits Z^k along a primitive matrix: the scale, the two invariant
// sublattices with their actions, brace vectors completing the generation,
// and the stage-one embedding data.
inline decomposition_result decompose(const int_matrix& a, const decomposition_pins& pins = {},
                                      const budget& bgt = budget{}) {
    require(a.is_square() && a.rows() >= 1, errc::not_square, "decomposition needs a square matrix");
    int k = a.rows();

    decomposition_result d;
    d.a = a;
    // Primitivity in the eventually-positive sense, so matrices with negative
    // entries but a strictly positive power qualify.
    auto wf = weak_pf_data(a, bgt);
    require(wf.has_value() && wf->eventually_positive(), errc::not_primitive,
            "decomposition needs a primitive matrix");
    d.lambda = wf->lambda;
    d.min_poly = wf->eigen_factor;
    d.degree = d.min_poly.degree();

    if (d.lambda.is_rational() && d.lambda.rational_value() == 1) {
        d.cyclic = true;
        d.notes.push_back("scale one: every other eigenvalue vanishes and the limit is cyclic");
        return d;
    }
    int n = d.degree;

    // The left eigenvector rows over the power basis; their common integer
    // kernel is exactly the trace kernel.
    d.w_coords = rat_matrix(n, k);
    for (int i = 0; i < k; ++i) {
        const std::vector<Rat>& c = wf->left[static_cast<std::size_t>(i)].coords();
        for (int t = 0; t < n && t < static_cast<int>(c.size()); ++t) d.w_coords.at(t, i) = c[static_cast<std::size_t>(t)];
    }
    int_matrix l = kernel_basis(d.w_coords);
    require(l.cols() == k - n, errc::defect, "left eigenvector entries do not span the scale field");
    if (pins.l_basis) {
        require(pins.l_basis->rows() == k && pins.l_basis->cols() == k - n &&
                    same_lattice(*pins.l_basis, l),
                errc::spec_invalid, "pinned kernel-part basis spans a different lattice");
        l = *pins.l_basis;
        d.notes.push_back("kernel-part basis pinned");
    }

    int_matrix f = kernel_basis(eval_int_poly_at(d.min_poly, a));
    require(f.cols() == n, errc::defect, "a conjugate eigenvalue repeats; the eigen kernel is too large");
    if (pins.f_basis) {
        require(pins.f_basis->rows() == k && pins.f_basis->cols() == n &&
                    same_lattice(*pins.f_basis, f),
                errc::spec_invalid, "pinned ordered-part basis spans a different lattice");
        f = *pins.f_basis;
        d.notes.push_back("ordered-part basis pinned");
    }
    d.l_basis = l;
    d.f_basis = f;

    // Exact orthogonality and the injectivity of the trace on F.
    rat_matrix wl = d.w_coords * to_rational(l);
    for (int i = 0; i < wl.rows(); ++i)
        for (int j = 0; j < wl.cols(); ++j)
            require(wl.at(i, j) == 0, errc::check_failed, "kernel-part basis escapes the eigenvector kernel");
    rat_matrix eta = d.w_coords * to_rational(f);
    for (int j = 0; j < n; ++j)
        require(detail_rz::from_coords(wf->field, eta.column(j)).sign() != 0, errc::defect,
                "the trace vanishes on an ordered-part basis vector");
    require(determinant(clear_row_denominators(eta)) != 0, errc::defect,
            "the trace is not injective on the ordered part");
    int_matrix fl = l.cols() == 0 ? f : int_matrix::hcat(f, l);
    require(determinant(fl) != 0, errc::check_failed, "the two parts do not span a full-rank sublattice");

    d.a_on_l = detail_dc::action_matrix(a, l, "kernel part is not invariant");
    d.a_on_f = detail_dc::action_matrix(a, f, "ordered part is not invariant");
    require(char_poly(d.a_on_f) == d.min_poly, errc::check_failed,
            "ordered-part action strays from the scale polynomial");

    // Kernel stabilization of the restricted action.
    int dim = k - n;
    int_matrix me = d.a_on_l; // M^e
    long long e = 1;
    while (dim > 0 && rank_of(me) != rank_of(me * me)) {
        require(e <= dim, errc::check_failed, "kernel chain failed to stabilize");
        me = me * d.a_on_l;
        ++e;
    }
    d.stabilization_e = e;
    d.l_kernel = dim > 0 ? kernel_basis(me) : int_matrix(0, 0);
    d.image_basis = dim > 0 ? lattice_basis(me) : int_matrix(0, 0);
    int r = d.image_basis.cols();
    d.stable_rank = r;
    require(d.l_kernel.cols() == dim - r, errc::check_failed, "kernel and image ranks disagree");

    d.k_invertible = int_matrix(r, r);
    d.phi_map = rat_matrix(r, dim);
    if (r > 0) {
        d.k_invertible = detail_dc::action_matrix(d.a_on_l, d.image_basis,
                                                  "stabilized image is not invariant");
        require(determinant(d.k_invertible) != 0, errc::check_failed,
                "stabilized action is singular on its image");
        rat_matrix powered = to_rational(d.k_invertible.pow(static_cast<unsigned long>(e)));
        for (int j = 0; j < dim; ++j) {
            std::vector<Int> img = detail_dc::lattice_coords(d.image_basis, me.column(j),
                                                             errc::check_failed,
                                                             "image column left its own lattice");
            std::vector<Rat> x = solve_rational(powered, detail_dc::to_rat_vector(img));
            for (int i = 0; i < r; ++i) d.phi_map.at(i, j) = x[static_cast<std::size_t>(i)];
        }
        require(d.phi_map * to_rational(d.a_on_l) == to_rational(d.k_invertible) * d.phi_map,
                errc::check_failed, "stage-one unordered coordinates break equivariance");
    }

    // Braces: the cheaper of the two complements, kernel-route when the
    // stable rank does not exceed the scale degree.
    d.braces_from_kernel = r <= n;
    if (pins.braces) {
        require(pins.braces->rows() == k || pins.braces->cols() == 0, errc::spec_invalid,
                "pinned braces have the wrong height");
        d.braces = *pins.braces;
        d.braces_from_kernel = false;
        d.notes.push_back("braces pinned");
    } else if (d.braces_from_kernel) {
        int_matrix pull = l * d.l_kernel; // kernel of M^e back in Z^k
        int_matrix span = pull.cols() == 0 ? f : int_matrix::hcat(f, pull);
        int_matrix sat = span.cols() == k ? int_matrix::identity(k) : saturate(span);
        int_matrix basis = extend_to_basis(sat, k);
        d.braces = basis.column_slice(sat.cols(), k);
    } else {
        int_matrix basis = extend_to_basis(l, k);
        d.braces = basis.column_slice(dim, k);
    }
    int s = d.braces.cols();
    require(s <= std::min(n, r), pins.braces ? errc::spec_invalid : errc::check_failed,
            "brace count exceeds the rank bound");

    // The descending lattice chain <A^i Z^k, L, F> and its stable index.
    int_matrix power = a;
    int_matrix stable = lattice_basis(int_matrix::hcat(power, fl));
    Int index = lattice_index(stable);
    long long chain = 1;
    for (;;) {
        int_matrix next_power = power * a;
        int_matrix next = lattice_basis(int_matrix::hcat(next_power, fl));
        Int next_index = lattice_index(next);
        if (next_index == index) {
            require(same_lattice(next, stable), errc::check_failed,
                    "equal chain indices with different lattices");
            power = next_power;
            break;
        }
        power = next_power;
        stable = next;
        index = next_index;
        ++chain;
        require(index <= abs_int(determinant(fl)), errc::check_failed,
                "chain index escaped its determinant bound");
    }
    d.stabilization_n = chain;
    d.stable_index = index;
    int_matrix recheck = lattice_basis(int_matrix::hcat(power * a, fl));
    require(lattice_index(recheck) == index, errc::check_failed,
            "lattice chain resumed after stabilizing");

    // Generation certificate: after j pushes, the whole lattice falls into
    // the span of the pushed braces with L and F.
    long long cap = std::max({d.stabilization_n, d.stabilization_e, 1LL}) + 4;
    bool generated = false;
    for (long long j = 0; j <= cap; ++j) {
        int_matrix pushed = j == 0 ? d.braces : a.pow(static_cast<unsigned long>(j)) * d.braces;
        int_matrix gens = pushed.cols() == 0 ? fl : int_matrix::hcat(pushed, fl);
        if (detail_dc::lattice_contains(gens, a.pow(static_cast<unsigned long>(j)))) {
            d.generation_power = j;
            d.stage_one_generation = j == 0;
            generated = true;
            break;
        }
    }
    require(generated, pins.braces ? errc::spec_invalid : errc::defect,
            "braces do not certify generation within the stabilization window");

    // Stage-one embedding rows.
    rat_matrix flq = to_rational(fl);
    auto theta_of = [&](const std::vector<Int>& z) {
        theta_row row;
        std::vector<Rat> c = solve_rational(flq, detail_dc::to_rat_vector(z));
        for (const Rat& q : c) row.multiple = lcm_int(row.multiple, denom(q));
        row.f_part.assign(c.begin(), c.begin() + n);
        row.l_part.assign(c.begin() + n, c.end());
        row.tau = eta.apply(row.f_part);
        row.phi = d.phi_map.apply(row.l_part);
        return row;
    };
    for (int i = 0; i < k; ++i) {
        std::vector<Int> ei(static_cast<std::size_t>(k), Int(0));
        ei[static_cast<std::size_t>(i)] = 1;
        d.embedding.push_back(theta_of(ei));
    }
    for (int j = 0; j < s; ++j) d.brace_embedding.push_back(theta_of(d.braces.column(j)));

    d.ordered_similarity = similarity_to_primitive_check(d.a_on_f, bgt);
    d.notes.push_back(d.braces_from_kernel ? "braces complete the saturated kernel span"
                                           : "braces complete the kernel-part basis");
    return d;
}

// Rebuilds realization input from a decomposition: the ordered-part action as
// the new presentation, the invertible kernel-part action, and braces restated
// over the new eigenvector coordinates.
struct rebuild_result {
    group_spec spec;
    rat_matrix h_eigen_coords;        // left-eigenvector coordinates of the rebuilt ordered part
    bool orientation_flipped = false; // original trace pairs negatively with the rebuilt eigenvector
    std::vector<int> brace_sources;   // decomposition brace index per rebuilt brace
    std::vector<std::string> notes;
};

inline rebuild_result rebuild_spec(const decomposition_result& d, const budget& bgt = budget{}) {
    require(!d.cyclic, errc::cyclic_group, "a cyclic limit has no presentation to rebuild");
    int n = d.degree, r = d.stable_rank;
    if (n > 1) {
        // The realization front door takes combinatorially primitive
        // presentations only; conjugating into one is not constructed.
        bool nonneg = true;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (d.a_on_f.at(i, j) < 0) nonneg = false;
        require(nonneg && is_primitive(d.a_on_f, bgt).primitive, errc::defect,
                "ordered-part action is not a primitive presentation in this basis");
    }

    rebuild_result rb;
    rb.spec.h_presentation = d.a_on_f;
    rb.spec.k_presentation = d.k_invertible;

    auto hw = weak_pf_data(d.a_on_f, bgt);
    require(hw.has_value() && hw->multiplicity_one && hw->positive_left, errc::defect,
            "rebuilt ordered part lost its eigenvector");
    rb.h_eigen_coords = rat_matrix(n, n);
    for (int j = 0; j < n; ++j) {
        const std::vector<Rat>& c = hw->left[static_cast<std::size_t>(j)].coords();
        for (int t = 0; t < n && t < static_cast<int>(c.size()); ++t)
            rb.h_eigen_coords.at(t, j) = c[static_cast<std::size_t>(t)];
    }

    // Orientation of the original trace against the positive eigenvector.
    // Both pair the ordered part with the scale eigenvalue, so they differ by
    // a field scalar; the rebuilt vector has first entry one, so the pairing
    // with the first basis column carries that scalar.
    {
        std::vector<Rat> pair0(static_cast<std::size_t>(n), Rat(0));
        for (int t = 0; t < n; ++t) {
            Rat acc(0);
            for (int i = 0; i < d.a.rows(); ++i) acc += d.w_coords.at(t, i) * Rat(d.f_basis.at(i, 0));
            pair0[static_cast<std::size_t>(t)] = acc;
        }
        nf_field fld = n > 1 ? make_field(d.lambda) : nullptr;
        rb.orientation_flipped = detail_rz::from_coords(fld, pair0).sign() < 0;
        if (rb.orientation_flipped)
            rb.notes.push_back("ordered-part orientation flipped against the rebuilt eigenvector");
    }

    for (std::size_t j = 0; j < d.brace_embedding.size(); ++j) {
        const theta_row& t = d.brace_embedding[j];
        if (t.multiple == 1) {
            rb.notes.push_back("brace " + std::to_string(j) + " lies in the direct span; dropped");
            continue;
        }
        brace_record z;
        z.m = t.multiple;
        std::vector<Rat> scaled(t.f_part.size());
        for (std::size_t i = 0; i < scaled.size(); ++i) {
            scaled[i] = t.f_part[i] * Rat(t.multiple);
            require(denom(scaled[i]) == 1, errc::check_failed, "brace split misses its own multiple");
        }
        z.h = rb.h_eigen_coords.apply(scaled);
        z.k.resize(static_cast<std::size_t>(r));
        for (int i = 0; i < r; ++i) z.k[static_cast<std::size_t>(i)] = t.phi[static_cast<std::size_t>(i)] * Rat(t.multiple);
        rb.brace_sources.push_back(static_cast<int>(j));
        rb.spec.braces.push_back(std::move(z));
    }
    return rb;
}

// One brace through the loop: its rebuilt denominator, the realization stage
// shift, and the two independently computed coordinate denominators.
struct brace_trip {
    int source = 0;
    Int rebuilt_m = 1;
    long long shift = 0;
    Int embedded_denominator = 1; // from the rebuilt fraction data
    Int realized_denominator = 1; // from the realized coordinate column
    bool match = false;
};

struct round_trip_report {
    decomposition_result decomposition;
    rebuild_result rebuilt;
    realization_certificate realized;
    bool lambda_power_match = false;
    long long lambda_exponent = 0;
    bool k_poly_match = false;
    long long k_exponent = 0;
    std::vector<brace_trip> braces;
    bool brace_denominators_match = false;
    std::vector<std::string> notes;

    bool invariants_match() const {
        return lambda_power_match && k_poly_match && brace_denominators_match;
    }
};

// Decomposes, rebuilds, realizes, and compares the invariants the loop must
// preserve. Matrix equality across the loop is not expected.
inline round_trip_report round_trip_check(const int_matrix& a, const decomposition_pins& pins = {},
                                          const realization_pins& rpins = {},
                                          const budget& bgt = budget{}) {
    round_trip_report rep;
    rep.decomposition = decompose(a, pins, bgt);
    require(!rep.decomposition.cyclic, errc::cyclic_group, "round trip needs a scale above one");
    rep.rebuilt = rebuild_spec(rep.decomposition, bgt);
    rep.realized = realize(rep.rebuilt.spec, rpins, bgt);

    const decomposition_result& d = rep.decomposition;
    rep.lambda_exponent = rep.realized.l1 * rep.realized.m_power;
    if (d.lambda.is_rational()) {
        Int lv = numer(d.lambda.rational_value());
        Int target = pow_int(lv, static_cast<unsigned long>(rep.lambda_exponent));
        rep.lambda_power_match =
            rep.realized.dominant_factor == int_poly(std::vector<Int>{-target, Int(1)});
    } else {
        nf_field fld = make_field(d.lambda);
        nf_element powered = detail_rz::nf_pow(nf_element::generator(fld), rep.lambda_exponent);
        nf_element acc{Rat(0)};
        nf_element pw = powered.one_like();
        const int_poly& df = rep.realized.dominant_factor;
        for (int i = 0; i <= df.degree(); ++i) {
            acc += Rat(df.coeff(i)) * pw;
            pw = pw * powered;
        }
        // The realized factor is irreducible, so vanishing at this power makes
        // it the minimal polynomial of the powered scale, whose conjugates all
        // stay strictly smaller in modulus: the dominant roots coincide.
        rep.lambda_power_match = acc.is_zero();
    }

    rep.k_exponent = rep.realized.l2 * rep.realized.m_power;
    if (d.stable_rank > 0) {
        int_poly realized_poly = char_poly(rep.realized.k_action);
        int_poly target = char_poly(d.k_invertible.pow(static_cast<unsigned long>(rep.k_exponent)));
        rep.k_poly_match = realized_poly == target;
    } else {
        rep.k_poly_match = true;
        rep.notes.push_back("no kernel part; the unordered comparison is vacuous");
    }

    // Realized brace columns versus the rebuilt fraction data. Rebuilt braces
    // always pair non-trivially with the eigenvector (their ordered split is
    // non-zero because the kernel part is saturated), so sign normalization is
    // the only change the validator may apply and the lists align one to one.
    // A stage shift rescales the column, so only unshifted braces are gated.
    int hc = rep.rebuilt.spec.h_presentation.rows();
    int r = rep.rebuilt.spec.k_presentation.rows();
    const std::vector<brace_record>& kept = rep.realized.spec.braces;
    require(kept.size() == rep.rebuilt.spec.braces.size(), errc::check_failed,
            "realization dropped a rebuilt brace");
    rep.brace_denominators_match = true;
    for (std::size_t j = 0; j < kept.size(); ++j) {
        const brace_record& src = rep.rebuilt.spec.braces[j];
        require(kept[j].m == src.m, errc::check_failed, "brace denominators were renumbered");

        brace_trip t;
        t.source = rep.rebuilt.brace_sources[j];
        t.rebuilt_m = src.m;
        t.shift = rep.realized.shifts[j];
        for (const Rat& q : src.h)
            t.embedded_denominator = lcm_int(t.embedded_denominator, denom(q / Rat(src.m)));
        for (const Rat& q : src.k)
            t.embedded_denominator = lcm_int(t.embedded_denominator, denom(q / Rat(src.m)));
        int col = hc + 2 * r + static_cast<int>(j);
        for (int i = 0; i < rep.realized.coords.rows(); ++i)
            t.realized_denominator = lcm_int(t.realized_denominator, denom(rep.realized.coords.at(i, col)));
        t.match = t.shift != 0 || t.realized_denominator == t.embedded_denominator;
        if (t.shift != 0)
            rep.notes.push_back("brace " + std::to_string(t.source) +
                                " stage-shifted; its column denominator is rescaled");
        rep.brace_denominators_match = rep.brace_denominators_match && t.match;
        rep.braces.push_back(t);
    }
    return rep;
}

} // namespace dimforge
