// JSON wire formats: arbitrary-precision integers and rationals travel as
// decimal strings, matrices as shaped nested arrays, and every document the
// command line reads or writes round-trips through these functions.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dimforge/decompose.hpp"
#include "dimforge/error.hpp"
#include "dimforge/integer.hpp"
#include "dimforge/matrix.hpp"
#include "dimforge/perron.hpp"
#include "dimforge/poly.hpp"
#include "dimforge/real_roots.hpp"
#include "dimforge/realize.hpp"

namespace dimforge {

using json = nlohmann::json;

inline constexpr const char* wire_version = "1";

namespace detail_sz {

[[noreturn]] inline void bad(const std::string& what) {
    throw usage_error("malformed document: " + what);
}

inline const json& member(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
    return j.at(key);
}

inline std::string text(const json& j, const char* what) {
    if (!j.is_string()) bad(std::string(what) + " must be a string");
    return j.get<std::string>();
}

inline long long count(const json& j, const char* what) {
    if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
    return j.get<long long>();
}

inline bool flag(const json& j, const char* what) {
    if (!j.is_boolean()) bad(std::string(what) + " must be a boolean");
    return j.get<bool>();
}

inline const json& list(const json& j, const char* what) {
    if (!j.is_array()) bad(std::string(what) + " must be an array");
    return j;
}

} // namespace detail_sz

// ---------------------------------------------------------------------------
// Scalars.
// ---------------------------------------------------------------------------

inline json to_json(const Int& x) { return to_string(x); }
inline json to_json(const Rat& x) { return to_string(x); }

inline Int int_from_json(const json& j) {
    return parse_int(detail_sz::text(j, "integer"));
}

inline Rat rat_from_json(const json& j) {
    return parse_rat(detail_sz::text(j, "rational"));
}

inline json to_json(const std::vector<Int>& v) {
    json a = json::array();
    for (const Int& x : v) a.push_back(to_json(x));
    return a;
}

inline json to_json(const std::vector<Rat>& v) {
    json a = json::array();
    for (const Rat& x : v) a.push_back(to_json(x));
    return a;
}

inline std::vector<Int> ints_from_json(const json& j) {
    std::vector<Int> v;
    for (const json& e : detail_sz::list(j, "integer vector")) v.push_back(int_from_json(e));
    return v;
}

inline std::vector<Rat> rats_from_json(const json& j) {
    std::vector<Rat> v;
    for (const json& e : detail_sz::list(j, "rational vector")) v.push_back(rat_from_json(e));
    return v;
}

// ---------------------------------------------------------------------------
// Matrices: {"rows", "cols", "data"} with row-major nested arrays.
// ---------------------------------------------------------------------------

inline json to_json(const int_matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(to_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

inline json to_json(const rat_matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(to_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

namespace detail_sz {

template <typename MatT, typename CellF>
MatT matrix_from_json(const json& j, CellF cell) {
    long long r = count(member(j, "rows"), "rows");
    long long c = count(member(j, "cols"), "cols");
    if (r < 0 || c < 0 || r > 4096 || c > 4096) bad("matrix shape out of range");
    const json& data = list(member(j, "data"), "matrix data");
    if (static_cast<long long>(data.size()) != r) bad("matrix row count disagrees with 'rows'");
    MatT m(static_cast<int>(r), static_cast<int>(c));
    for (long long i = 0; i < r; ++i) {
        const json& row = list(data[static_cast<std::size_t>(i)], "matrix row");
        if (static_cast<long long>(row.size()) != c) bad("matrix row length disagrees with 'cols'");
        for (long long k = 0; k < c; ++k)
            m.at(static_cast<int>(i), static_cast<int>(k)) = cell(row[static_cast<std::size_t>(k)]);
    }
    return m;
}

} // namespace detail_sz

inline int_matrix int_matrix_from_json(const json& j) {
    return detail_sz::matrix_from_json<int_matrix>(j, [](const json& e) { return int_from_json(e); });
}

inline rat_matrix rat_matrix_from_json(const json& j) {
    return detail_sz::matrix_from_json<rat_matrix>(j, [](const json& e) { return rat_from_json(e); });
}

// ---------------------------------------------------------------------------
// Polynomials (ascending coefficients) and algebraic numbers.
// ---------------------------------------------------------------------------

inline json to_json(const int_poly& p) {
    json a = json::array();
    for (int i = 0; i <= p.degree(); ++i) a.push_back(to_json(p.coeff(i)));
    return a;
}

inline int_poly int_poly_from_json(const json& j) {
    return int_poly(ints_from_json(j));
}

// The checked constructor re-certifies that the interval isolates a root of
// the given irreducible polynomial, so a decoded value is trustworthy.
inline json to_json(const algebraic_number& a) {
    return json{{"min_poly", to_json(a.min_poly())}, {"lo", to_json(a.lo())}, {"hi", to_json(a.hi())}};
}

inline algebraic_number algebraic_from_json(const json& j) {
    return algebraic_number(int_poly_from_json(detail_sz::member(j, "min_poly")),
                            rat_from_json(detail_sz::member(j, "lo")),
                            rat_from_json(detail_sz::member(j, "hi")));
}

// ---------------------------------------------------------------------------
// Group specifications and pins.
// ---------------------------------------------------------------------------

inline json to_json(const group_spec& s) {
    json braces = json::array();
    for (const brace_record& z : s.braces)
        braces.push_back(json{{"m", to_json(z.m)}, {"h", to_json(z.h)}, {"k", to_json(z.k)}});
    return json{{"h_presentation", to_json(s.h_presentation)},
                {"k_presentation", to_json(s.k_presentation)},
                {"braces", std::move(braces)}};
}

inline group_spec spec_from_json(const json& j) {
    group_spec s;
    s.h_presentation = int_matrix_from_json(detail_sz::member(j, "h_presentation"));
    s.k_presentation = int_matrix_from_json(detail_sz::member(j, "k_presentation"));
    for (const json& e : detail_sz::list(detail_sz::member(j, "braces"), "braces")) {
        brace_record z;
        z.m = int_from_json(detail_sz::member(e, "m"));
        z.h = rats_from_json(detail_sz::member(e, "h"));
        z.k = rats_from_json(detail_sz::member(e, "k"));
        s.braces.push_back(std::move(z));
    }
    return s;
}

inline json to_json(const realization_pins& p) {
    json j = json::object();
    if (p.l1) j["l1"] = *p.l1;
    if (p.l2) j["l2"] = *p.l2;
    if (p.kernel) j["kernel"] = to_json(*p.kernel);
    if (p.complement) j["complement"] = to_json(*p.complement);
    if (p.w0) j["w0"] = to_json(*p.w0);
    if (p.m_power) j["m_power"] = *p.m_power;
    if (p.a_coeffs) j["a_coeffs"] = to_json(*p.a_coeffs);
    if (p.k_block) j["k_block"] = to_json(*p.k_block);
    return j;
}

inline realization_pins realization_pins_from_json(const json& j) {
    if (!j.is_object()) detail_sz::bad("pins must be an object");
    realization_pins p;
    if (j.contains("l1")) p.l1 = detail_sz::count(j.at("l1"), "l1");
    if (j.contains("l2")) p.l2 = detail_sz::count(j.at("l2"), "l2");
    if (j.contains("kernel")) p.kernel = int_matrix_from_json(j.at("kernel"));
    if (j.contains("complement")) p.complement = int_matrix_from_json(j.at("complement"));
    if (j.contains("w0")) p.w0 = ints_from_json(j.at("w0"));
    if (j.contains("m_power")) p.m_power = detail_sz::count(j.at("m_power"), "m_power");
    if (j.contains("a_coeffs")) p.a_coeffs = ints_from_json(j.at("a_coeffs"));
    if (j.contains("k_block")) p.k_block = int_matrix_from_json(j.at("k_block"));
    return p;
}

inline json to_json(const decomposition_pins& p) {
    json j = json::object();
    if (p.l_basis) j["l_basis"] = to_json(*p.l_basis);
    if (p.f_basis) j["f_basis"] = to_json(*p.f_basis);
    if (p.braces) j["braces"] = to_json(*p.braces);
    return j;
}

inline decomposition_pins decomposition_pins_from_json(const json& j) {
    if (!j.is_object()) detail_sz::bad("pins must be an object");
    decomposition_pins p;
    if (j.contains("l_basis")) p.l_basis = int_matrix_from_json(j.at("l_basis"));
    if (j.contains("f_basis")) p.f_basis = int_matrix_from_json(j.at("f_basis"));
    if (j.contains("braces")) p.braces = int_matrix_from_json(j.at("braces"));
    return p;
}

// ---------------------------------------------------------------------------
// Realization certificates.
// ---------------------------------------------------------------------------

namespace detail_sz {

inline json notes_to_json(const std::vector<std::string>& notes) {
    json a = json::array();
    for (const std::string& s : notes) a.push_back(s);
    return a;
}

inline std::vector<std::string> notes_from_json(const json& j) {
    std::vector<std::string> v;
    for (const json& e : list(j, "notes")) v.push_back(text(e, "note"));
    return v;
}

// Field elements travel as power-basis coordinate rows next to the field's
// defining data, so a decoded certificate is self-contained.
inline json field_vector_to_json(const std::vector<nf_element>& v) {
    json coords = json::array();
    std::optional<algebraic_number> root;
    for (const nf_element& e : v) {
        coords.push_back(to_json(e.coords()));
        if (e.field() != nullptr && !root) root = e.field()->root;
    }
    json j{{"coords", std::move(coords)}};
    j["field"] = root ? to_json(*root) : json();
    return j;
}

inline std::vector<nf_element> field_vector_from_json(const json& j) {
    nf_field fld = nullptr;
    const json& froot = member(j, "field");
    if (!froot.is_null()) fld = make_field(algebraic_from_json(froot));
    std::vector<nf_element> v;
    for (const json& e : list(member(j, "coords"), "field coordinates")) {
        std::vector<Rat> c = rats_from_json(e);
        if (fld == nullptr && c.size() != 1) bad("rational field element needs one coordinate");
        v.push_back(detail_rz::from_coords(c.size() == 1 ? nullptr : fld, c));
    }
    return v;
}

} // namespace detail_sz

inline json to_json(const realization_checks& c) {
    return json{{"kernel_annihilated", c.kernel_annihilated},
                {"diagram_commutes", c.diagram_commutes},
                {"positive_power", c.positive_power},
                {"dominant_scale", c.dominant_scale},
                {"k_action_matches", c.k_action_matches},
                {"denominators_match", c.denominators_match}};
}

inline realization_checks checks_from_json(const json& j) {
    realization_checks c;
    c.kernel_annihilated = detail_sz::flag(detail_sz::member(j, "kernel_annihilated"), "check");
    c.diagram_commutes = detail_sz::flag(detail_sz::member(j, "diagram_commutes"), "check");
    c.positive_power = detail_sz::flag(detail_sz::member(j, "positive_power"), "check");
    c.dominant_scale = detail_sz::flag(detail_sz::member(j, "dominant_scale"), "check");
    c.k_action_matches = detail_sz::flag(detail_sz::member(j, "k_action_matches"), "check");
    c.denominators_match = detail_sz::flag(detail_sz::member(j, "denominators_match"), "check");
    return c;
}

inline json to_json(const denominator_report& d) {
    return json{{"basis_det", to_json(d.basis_det)},
                {"h_denominator", to_json(d.h_denominator)},
                {"k_denominator", to_json(d.k_denominator)},
                {"position_h", to_json(d.position_h)},
                {"position_k", to_json(d.position_k)}};
}

inline denominator_report denominators_from_json(const json& j) {
    denominator_report d;
    d.basis_det = int_from_json(detail_sz::member(j, "basis_det"));
    d.h_denominator = int_from_json(detail_sz::member(j, "h_denominator"));
    d.k_denominator = int_from_json(detail_sz::member(j, "k_denominator"));
    d.position_h = ints_from_json(detail_sz::member(j, "position_h"));
    d.position_k = ints_from_json(detail_sz::member(j, "position_k"));
    return d;
}

inline json to_json(const realization_certificate& c) {
    json shifts = json::array();
    for (long long s : c.shifts) shifts.push_back(s);
    json j{{"spec_version", wire_version},
           {"spec", to_json(c.spec)},
           {"notes", detail_sz::notes_to_json(c.notes)},
           {"l1", c.l1},
           {"l2", c.l2},
           {"shifts", std::move(shifts)},
           {"ratio", json{{"l_bound", to_json(c.ratio.l_bound)},
                          {"growth_bound", to_json(c.ratio.growth_bound)},
                          {"certified", c.ratio.certified}}},
           {"coords", to_json(c.coords)},
           {"a_initial", to_json(c.a_initial)},
           {"kernel", to_json(c.kernel)},
           {"completion", to_json(c.completion)},
           {"a_prime", to_json(c.a_prime)},
           {"w0", to_json(c.w0)},
           {"v0", detail_sz::field_vector_to_json(c.v0)},
           {"m_power", c.m_power},
           {"a_coeffs", to_json(c.a_coeffs)},
           {"a_final", to_json(c.a_final)},
           {"dominant_factor", to_json(c.dominant_factor)},
           {"k_action_poly", to_json(c.k_action_poly)},
           {"k_sublattice", to_json(c.k_sublattice)},
           {"k_action", to_json(c.k_action)},
           {"denominators", to_json(c.denominators)},
           {"checks", to_json(c.checks)}};
    j["positivity_exponent"] = c.positivity_exponent ? json(*c.positivity_exponent) : json();
    return j;
}

inline realization_certificate certificate_from_json(const json& j) {
    const json& ver = detail_sz::member(j, "spec_version");
    if (detail_sz::text(ver, "spec_version") != wire_version)
        detail_sz::bad("unsupported certificate version");
    realization_certificate c;
    c.spec = spec_from_json(detail_sz::member(j, "spec"));
    c.notes = detail_sz::notes_from_json(detail_sz::member(j, "notes"));
    c.l1 = detail_sz::count(detail_sz::member(j, "l1"), "l1");
    c.l2 = detail_sz::count(detail_sz::member(j, "l2"), "l2");
    for (const json& e : detail_sz::list(detail_sz::member(j, "shifts"), "shifts"))
        c.shifts.push_back(detail_sz::count(e, "shift"));
    const json& ratio = detail_sz::member(j, "ratio");
    c.ratio.l_bound = int_from_json(detail_sz::member(ratio, "l_bound"));
    c.ratio.growth_bound = int_from_json(detail_sz::member(ratio, "growth_bound"));
    c.ratio.certified = detail_sz::flag(detail_sz::member(ratio, "certified"), "certified");
    c.coords = rat_matrix_from_json(detail_sz::member(j, "coords"));
    c.a_initial = int_matrix_from_json(detail_sz::member(j, "a_initial"));
    c.kernel = int_matrix_from_json(detail_sz::member(j, "kernel"));
    c.completion = int_matrix_from_json(detail_sz::member(j, "completion"));
    c.a_prime = int_matrix_from_json(detail_sz::member(j, "a_prime"));
    c.w0 = ints_from_json(detail_sz::member(j, "w0"));
    c.v0 = detail_sz::field_vector_from_json(detail_sz::member(j, "v0"));
    c.m_power = detail_sz::count(detail_sz::member(j, "m_power"), "m_power");
    c.a_coeffs = ints_from_json(detail_sz::member(j, "a_coeffs"));
    c.a_final = int_matrix_from_json(detail_sz::member(j, "a_final"));
    const json& pe = detail_sz::member(j, "positivity_exponent");
    if (!pe.is_null()) c.positivity_exponent = detail_sz::count(pe, "positivity_exponent");
    c.dominant_factor = int_poly_from_json(detail_sz::member(j, "dominant_factor"));
    c.k_action_poly = int_poly_from_json(detail_sz::member(j, "k_action_poly"));
    c.k_sublattice = int_matrix_from_json(detail_sz::member(j, "k_sublattice"));
    c.k_action = int_matrix_from_json(detail_sz::member(j, "k_action"));
    c.denominators = denominators_from_json(detail_sz::member(j, "denominators"));
    c.checks = checks_from_json(detail_sz::member(j, "checks"));
    return c;
}

// ---------------------------------------------------------------------------
// Decomposition results and round-trip reports.
// ---------------------------------------------------------------------------

inline json to_json(const theta_row& t) {
    return json{{"multiple", to_json(t.multiple)},
                {"f_part", to_json(t.f_part)},
                {"l_part", to_json(t.l_part)},
                {"tau", to_json(t.tau)},
                {"phi", to_json(t.phi)}};
}

inline theta_row theta_from_json(const json& j) {
    theta_row t;
    t.multiple = int_from_json(detail_sz::member(j, "multiple"));
    t.f_part = rats_from_json(detail_sz::member(j, "f_part"));
    t.l_part = rats_from_json(detail_sz::member(j, "l_part"));
    t.tau = rats_from_json(detail_sz::member(j, "tau"));
    t.phi = rats_from_json(detail_sz::member(j, "phi"));
    return t;
}

inline similarity_verdict verdict_from_json(const json& j) {
    std::string s = detail_sz::text(j, "verdict");
    for (similarity_verdict v : {similarity_verdict::pass, similarity_verdict::fail,
                                 similarity_verdict::no_weak_pf,
                                 similarity_verdict::not_applicable_irrational})
        if (s == similarity_verdict_name(v)) return v;
    detail_sz::bad("unknown similarity verdict '" + s + "'");
}

inline json to_json(const similarity_report& s) {
    json j{{"verdict", similarity_verdict_name(s.verdict)},
           {"dimension", s.dimension},
           {"pairing", to_json(s.pairing)},
           {"right", to_json(s.right)},
           {"left", to_json(s.left)}};
    j["conjugator"] = s.conjugator ? to_json(*s.conjugator) : json();
    return j;
}

inline similarity_report similarity_from_json(const json& j) {
    similarity_report s;
    s.verdict = verdict_from_json(detail_sz::member(j, "verdict"));
    s.dimension = detail_sz::count(detail_sz::member(j, "dimension"), "dimension");
    s.pairing = int_from_json(detail_sz::member(j, "pairing"));
    s.right = ints_from_json(detail_sz::member(j, "right"));
    s.left = ints_from_json(detail_sz::member(j, "left"));
    const json& c = detail_sz::member(j, "conjugator");
    if (!c.is_null()) s.conjugator = int_matrix_from_json(c);
    return s;
}

inline json to_json(const decomposition_result& d) {
    json emb = json::array(), bemb = json::array();
    for (const theta_row& t : d.embedding) emb.push_back(to_json(t));
    for (const theta_row& t : d.brace_embedding) bemb.push_back(to_json(t));
    return json{{"spec_version", wire_version},
                {"a", to_json(d.a)},
                {"lambda", to_json(d.lambda)},
                {"min_poly", to_json(d.min_poly)},
                {"degree", d.degree},
                {"cyclic", d.cyclic},
                {"w_coords", to_json(d.w_coords)},
                {"l_basis", to_json(d.l_basis)},
                {"f_basis", to_json(d.f_basis)},
                {"a_on_l", to_json(d.a_on_l)},
                {"a_on_f", to_json(d.a_on_f)},
                {"stabilization_e", d.stabilization_e},
                {"stable_rank", d.stable_rank},
                {"l_kernel", to_json(d.l_kernel)},
                {"image_basis", to_json(d.image_basis)},
                {"k_invertible", to_json(d.k_invertible)},
                {"phi_map", to_json(d.phi_map)},
                {"braces", to_json(d.braces)},
                {"braces_from_kernel", d.braces_from_kernel},
                {"stabilization_n", d.stabilization_n},
                {"stable_index", to_json(d.stable_index)},
                {"stage_one_generation", d.stage_one_generation},
                {"generation_power", d.generation_power},
                {"embedding", std::move(emb)},
                {"brace_embedding", std::move(bemb)},
                {"ordered_similarity", to_json(d.ordered_similarity)},
                {"notes", detail_sz::notes_to_json(d.notes)}};
}

inline decomposition_result decomposition_from_json(const json& j) {
    if (detail_sz::text(detail_sz::member(j, "spec_version"), "spec_version") != wire_version)
        detail_sz::bad("unsupported decomposition version");
    decomposition_result d;
    d.a = int_matrix_from_json(detail_sz::member(j, "a"));
    d.lambda = algebraic_from_json(detail_sz::member(j, "lambda"));
    d.min_poly = int_poly_from_json(detail_sz::member(j, "min_poly"));
    d.degree = static_cast<int>(detail_sz::count(detail_sz::member(j, "degree"), "degree"));
    d.cyclic = detail_sz::flag(detail_sz::member(j, "cyclic"), "cyclic");
    d.w_coords = rat_matrix_from_json(detail_sz::member(j, "w_coords"));
    d.l_basis = int_matrix_from_json(detail_sz::member(j, "l_basis"));
    d.f_basis = int_matrix_from_json(detail_sz::member(j, "f_basis"));
    d.a_on_l = int_matrix_from_json(detail_sz::member(j, "a_on_l"));
    d.a_on_f = int_matrix_from_json(detail_sz::member(j, "a_on_f"));
    d.stabilization_e = detail_sz::count(detail_sz::member(j, "stabilization_e"), "stabilization_e");
    d.stable_rank = static_cast<int>(detail_sz::count(detail_sz::member(j, "stable_rank"), "stable_rank"));
    d.l_kernel = int_matrix_from_json(detail_sz::member(j, "l_kernel"));
    d.image_basis = int_matrix_from_json(detail_sz::member(j, "image_basis"));
    d.k_invertible = int_matrix_from_json(detail_sz::member(j, "k_invertible"));
    d.phi_map = rat_matrix_from_json(detail_sz::member(j, "phi_map"));
    d.braces = int_matrix_from_json(detail_sz::member(j, "braces"));
    d.braces_from_kernel = detail_sz::flag(detail_sz::member(j, "braces_from_kernel"), "braces_from_kernel");
    d.stabilization_n = detail_sz::count(detail_sz::member(j, "stabilization_n"), "stabilization_n");
    d.stable_index = int_from_json(detail_sz::member(j, "stable_index"));
    d.stage_one_generation =
        detail_sz::flag(detail_sz::member(j, "stage_one_generation"), "stage_one_generation");
    d.generation_power = detail_sz::count(detail_sz::member(j, "generation_power"), "generation_power");
    for (const json& e : detail_sz::list(detail_sz::member(j, "embedding"), "embedding"))
        d.embedding.push_back(theta_from_json(e));
    for (const json& e : detail_sz::list(detail_sz::member(j, "brace_embedding"), "brace embedding"))
        d.brace_embedding.push_back(theta_from_json(e));
    d.ordered_similarity = similarity_from_json(detail_sz::member(j, "ordered_similarity"));
    d.notes = detail_sz::notes_from_json(detail_sz::member(j, "notes"));
    return d;
}

inline json to_json(const rebuild_result& r) {
    json sources = json::array();
    for (int s : r.brace_sources) sources.push_back(s);
    return json{{"spec", to_json(r.spec)},
                {"h_eigen_coords", to_json(r.h_eigen_coords)},
                {"orientation_flipped", r.orientation_flipped},
                {"brace_sources", std::move(sources)},
                {"notes", detail_sz::notes_to_json(r.notes)}};
}

inline rebuild_result rebuild_from_json(const json& j) {
    rebuild_result r;
    r.spec = spec_from_json(detail_sz::member(j, "spec"));
    r.h_eigen_coords = rat_matrix_from_json(detail_sz::member(j, "h_eigen_coords"));
    r.orientation_flipped = detail_sz::flag(detail_sz::member(j, "orientation_flipped"), "orientation");
    for (const json& e : detail_sz::list(detail_sz::member(j, "brace_sources"), "brace sources"))
        r.brace_sources.push_back(static_cast<int>(detail_sz::count(e, "brace source")));
    r.notes = detail_sz::notes_from_json(detail_sz::member(j, "notes"));
    return r;
}

inline json to_json(const brace_trip& t) {
    return json{{"source", t.source},
                {"rebuilt_m", to_json(t.rebuilt_m)},
                {"shift", t.shift},
                {"embedded_denominator", to_json(t.embedded_denominator)},
                {"realized_denominator", to_json(t.realized_denominator)},
                {"match", t.match}};
}

inline brace_trip brace_trip_from_json(const json& j) {
    brace_trip t;
    t.source = static_cast<int>(detail_sz::count(detail_sz::member(j, "source"), "source"));
    t.rebuilt_m = int_from_json(detail_sz::member(j, "rebuilt_m"));
    t.shift = detail_sz::count(detail_sz::member(j, "shift"), "shift");
    t.embedded_denominator = int_from_json(detail_sz::member(j, "embedded_denominator"));
    t.realized_denominator = int_from_json(detail_sz::member(j, "realized_denominator"));
    t.match = detail_sz::flag(detail_sz::member(j, "match"), "match");
    return t;
}

inline json to_json(const round_trip_report& r) {
    json trips = json::array();
    for (const brace_trip& t : r.braces) trips.push_back(to_json(t));
    return json{{"spec_version", wire_version},
                {"decomposition", to_json(r.decomposition)},
                {"rebuilt", to_json(r.rebuilt)},
                {"realized", to_json(r.realized)},
                {"lambda_power_match", r.lambda_power_match},
                {"lambda_exponent", r.lambda_exponent},
                {"k_poly_match", r.k_poly_match},
                {"k_exponent", r.k_exponent},
                {"braces", std::move(trips)},
                {"brace_denominators_match", r.brace_denominators_match},
                {"notes", detail_sz::notes_to_json(r.notes)}};
}

inline round_trip_report round_trip_from_json(const json& j) {
    if (detail_sz::text(detail_sz::member(j, "spec_version"), "spec_version") != wire_version)
        detail_sz::bad("unsupported report version");
    round_trip_report r;
    r.decomposition = decomposition_from_json(detail_sz::member(j, "decomposition"));
    r.rebuilt = rebuild_from_json(detail_sz::member(j, "rebuilt"));
    r.realized = certificate_from_json(detail_sz::member(j, "realized"));
    r.lambda_power_match = detail_sz::flag(detail_sz::member(j, "lambda_power_match"), "lambda match");
    r.lambda_exponent = detail_sz::count(detail_sz::member(j, "lambda_exponent"), "lambda exponent");
    r.k_poly_match = detail_sz::flag(detail_sz::member(j, "k_poly_match"), "k match");
    r.k_exponent = detail_sz::count(detail_sz::member(j, "k_exponent"), "k exponent");
    for (const json& e : detail_sz::list(detail_sz::member(j, "braces"), "brace trips"))
        r.braces.push_back(brace_trip_from_json(e));
    r.brace_denominators_match =
        detail_sz::flag(detail_sz::member(j, "brace_denominators_match"), "brace denominators");
    r.notes = detail_sz::notes_from_json(detail_sz::member(j, "notes"));
    return r;
}

} // namespace dimforge
