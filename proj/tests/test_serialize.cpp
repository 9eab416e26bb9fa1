#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <string>

#include "dimforge/serialize.hpp"

using namespace dimforge;

namespace {

int_matrix M(std::initializer_list<std::initializer_list<long long>> rows) {
    int r = static_cast<int>(rows.size());
    int c = r > 0 ? static_cast<int>(rows.begin()->size()) : 0;
    int_matrix m(r, c);
    int i = 0;
    for (const auto& row : rows) {
        int j = 0;
        for (long long v : row) m.at(i, j++) = v;
        ++i;
    }
    return m;
}

std::vector<Rat> rats(std::initializer_list<std::pair<long long, long long>> parts) {
    std::vector<Rat> v;
    for (auto [num, den] : parts) v.push_back(make_rat(Int(num), Int(den)));
    return v;
}

int_matrix remark_matrix() { return M({{1, 2, 2}, {1, 4, 0}, {1, 0, 4}}); }

} // namespace

TEST_CASE("scalars travel as decimal strings") {
    Int big = parse_int("123456789012345678901234567890");
    CHECK(to_json(big).get<std::string>() == "123456789012345678901234567890");
    CHECK(int_from_json(to_json(big)) == big);
    CHECK(int_from_json(json("-7314")) == Int(-7314));

    Rat q = make_rat(Int(-5), Int(4));
    CHECK(to_json(q).get<std::string>() == "-5/4");
    CHECK(rat_from_json(to_json(q)) == q);
    CHECK(to_json(Rat(3)).get<std::string>() == "3");
    CHECK(rat_from_json(json("3")) == Rat(3));

    std::vector<Int> vi{Int(0), Int(-1), big};
    CHECK(ints_from_json(to_json(vi)) == vi);
    std::vector<Rat> vq = rats({{1, 2}, {-7, 3}});
    CHECK(rats_from_json(to_json(vq)) == vq);

    CHECK_THROWS_AS(int_from_json(json(12)), usage_error);
    CHECK_THROWS_AS(int_from_json(json("12x")), usage_error);
    CHECK_THROWS_AS(rat_from_json(json("1/")), usage_error);
    CHECK_THROWS_AS(ints_from_json(json("nope")), usage_error);
}

TEST_CASE("matrices carry shape plus row-major data") {
    int_matrix a = M({{5, -2}, {0, 7}, {1, 1}});
    json j = to_json(a);
    CHECK(j["rows"] == 3);
    CHECK(j["cols"] == 2);
    CHECK(j["data"][0][1] == "-2");
    CHECK(int_matrix_from_json(j) == a);

    rat_matrix q(2, 2);
    q.at(0, 0) = make_rat(Int(1), Int(4));
    q.at(1, 1) = make_rat(Int(-1), Int(4));
    CHECK(rat_matrix_from_json(to_json(q)) == q);

    int_matrix empty(0, 3);
    CHECK(int_matrix_from_json(to_json(empty)) == empty);

    json bad = to_json(a);
    bad["rows"] = 2;
    CHECK_THROWS_AS(int_matrix_from_json(bad), usage_error);
    bad = to_json(a);
    bad["data"][1] = json::array({"1"});
    CHECK_THROWS_AS(int_matrix_from_json(bad), usage_error);
    bad = to_json(a);
    bad.erase("cols");
    CHECK_THROWS_AS(int_matrix_from_json(bad), usage_error);
    CHECK_THROWS_AS(int_matrix_from_json(json("[]")), usage_error);
}

TEST_CASE("polynomials and algebraic numbers re-validate on decode") {
    int_poly p(std::vector<Int>{Int(3), Int(-5), Int(1)});
    CHECK(int_poly_from_json(to_json(p)) == p);

    decomposition_result d = decompose(M({{1, 1}, {1, 4}}));
    const algebraic_number& lam = d.lambda;
    algebraic_number back = algebraic_from_json(to_json(lam));
    CHECK(back.min_poly() == lam.min_poly());
    CHECK(back.lo() == lam.lo());
    CHECK(back.hi() == lam.hi());

    // An enclosure may name any real root, but it must isolate one: the
    // minimal polynomial here has no root between 2 and 3.
    json conjugate = to_json(lam);
    conjugate["lo"] = "0";
    conjugate["hi"] = "1";
    CHECK(algebraic_from_json(conjugate).min_poly() == lam.min_poly());
    json forged = to_json(lam);
    forged["lo"] = "2";
    forged["hi"] = "3";
    CHECK_THROWS_AS(algebraic_from_json(forged), domain_error);

    algebraic_number five = algebraic_number::from_rational(Rat(5));
    CHECK(algebraic_from_json(to_json(five)).is_rational());
}

TEST_CASE("group specifications and pins round-trip") {
    group_spec spec;
    spec.h_presentation = M({{5}});
    spec.k_presentation = M({{1, 1}, {1, 4}});
    spec.braces.push_back({Int(2), rats({{1, 1}}), rats({{1, 1}, {1, 1}})});

    json j = to_json(spec);
    group_spec back = spec_from_json(j);
    CHECK(back.h_presentation == spec.h_presentation);
    CHECK(back.k_presentation == spec.k_presentation);
    REQUIRE(back.braces.size() == 1);
    CHECK(back.braces[0].m == spec.braces[0].m);
    CHECK(back.braces[0].h == spec.braces[0].h);
    CHECK(back.braces[0].k == spec.braces[0].k);
    CHECK(to_json(back) == j);

    realization_pins pins;
    pins.l1 = 3;
    pins.k_block = M({{2, 0}, {0, 3}});
    json pj = to_json(pins);
    CHECK(!pj.contains("w0"));
    realization_pins pback = realization_pins_from_json(pj);
    CHECK(pback.l1 == 3);
    CHECK(!pback.l2);
    CHECK(!pback.kernel);
    REQUIRE(pback.k_block);
    CHECK(*pback.k_block == *pins.k_block);
    CHECK(to_json(pback) == pj);
    CHECK(realization_pins_from_json(json::object()).l1 == std::nullopt);
    CHECK_THROWS_AS(realization_pins_from_json(json::array()), usage_error);

    decomposition_pins dp;
    dp.braces = M({{0}, {0}, {1}});
    json dj = to_json(dp);
    decomposition_pins dback = decomposition_pins_from_json(dj);
    CHECK(!dback.l_basis);
    REQUIRE(dback.braces);
    CHECK(*dback.braces == *dp.braces);
    CHECK(to_json(dback) == dj);
}

TEST_CASE("certificates round-trip and re-verify") {
    decomposition_result d = decompose(remark_matrix());
    rebuild_result rb = rebuild_spec(d);
    realization_certificate cert = realize(rb.spec);
    REQUIRE(cert.checks.all());

    json j = to_json(cert);
    CHECK(j["spec_version"] == wire_version);
    realization_certificate back = certificate_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(back.l1 == cert.l1);
    CHECK(back.l2 == cert.l2);
    CHECK(back.shifts == cert.shifts);
    CHECK(back.a_final == cert.a_final);
    CHECK(back.coords == cert.coords);
    CHECK(back.denominators.basis_det == cert.denominators.basis_det);
    CHECK(back.positivity_exponent == cert.positivity_exponent);
    REQUIRE(back.v0.size() == cert.v0.size());
    for (std::size_t i = 0; i < back.v0.size(); ++i) CHECK(back.v0[i] == cert.v0[i]);

    realization_certificate again = recheck_certificate(back);
    CHECK(again.checks.all());

    json gate = j;
    gate["spec_version"] = "0";
    CHECK_THROWS_AS(certificate_from_json(gate), usage_error);
    json typed = j;
    typed["a_final"]["data"][0][0] = 5;
    CHECK_THROWS_AS(certificate_from_json(typed), usage_error);
    json missing = j;
    missing.erase("w0");
    CHECK_THROWS_AS(certificate_from_json(missing), usage_error);
}

TEST_CASE("irrational-scale certificates keep their field data") {
    round_trip_report rep = round_trip_check(M({{1, 1}, {1, 4}}));
    const realization_certificate& cert = rep.realized;
    REQUIRE(!cert.v0.empty());
    REQUIRE(cert.v0[0].field() != nullptr);

    json j = to_json(cert);
    CHECK(!j["v0"]["field"].is_null());
    realization_certificate back = certificate_from_json(j);
    REQUIRE(back.v0.size() == cert.v0.size());
    for (std::size_t i = 0; i < back.v0.size(); ++i) CHECK(back.v0[i] == cert.v0[i]);
    CHECK(to_json(back) == j);
    CHECK(recheck_certificate(back).checks.all());
}

TEST_CASE("tampering with a stored certificate is caught on recheck") {
    decomposition_result d = decompose(remark_matrix());
    realization_certificate cert = realize(rebuild_spec(d).spec);

    json j = to_json(cert);
    Int bumped = parse_int(j["a_final"]["data"][0][0].get<std::string>()) + 1;
    j["a_final"]["data"][0][0] = to_string(bumped);

    realization_certificate forged = certificate_from_json(j);
    bool named = false;
    try {
        recheck_certificate(forged);
        FAIL("forged certificate slipped through");
    } catch (const domain_error& e) {
        CHECK(e.code() == errc::check_failed);
        std::string detail = e.detail();
        CHECK(detail.find("realization checks failed") != std::string::npos);
        named = detail.find("kernel annihilation") != std::string::npos ||
                detail.find("stage diagram") != std::string::npos;
    }
    CHECK(named);
}

TEST_CASE("decomposition results round-trip") {
    decomposition_result d = decompose(remark_matrix());
    json j = to_json(d);
    CHECK(j["spec_version"] == wire_version);
    decomposition_result back = decomposition_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(back.a == d.a);
    CHECK(back.l_basis == d.l_basis);
    CHECK(back.a_on_l == d.a_on_l);
    CHECK(back.k_invertible == d.k_invertible);
    CHECK(back.phi_map == d.phi_map);
    CHECK(back.stable_index == d.stable_index);
    CHECK(back.stage_one_generation == d.stage_one_generation);
    REQUIRE(back.embedding.size() == d.embedding.size());
    for (std::size_t i = 0; i < back.embedding.size(); ++i) {
        CHECK(back.embedding[i].multiple == d.embedding[i].multiple);
        CHECK(back.embedding[i].tau == d.embedding[i].tau);
        CHECK(back.embedding[i].phi == d.embedding[i].phi);
    }
    CHECK(back.ordered_similarity.verdict == d.ordered_similarity.verdict);
    CHECK(!back.ordered_similarity.conjugator);

    json bad = j;
    bad["ordered_similarity"]["verdict"] = "Sideways";
    CHECK_THROWS_AS(decomposition_from_json(bad), usage_error);
}

TEST_CASE("round-trip reports round-trip") {
    round_trip_report rep = round_trip_check(remark_matrix());
    REQUIRE(rep.invariants_match());

    json j = to_json(rep);
    round_trip_report back = round_trip_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(back.lambda_power_match == rep.lambda_power_match);
    CHECK(back.lambda_exponent == rep.lambda_exponent);
    CHECK(back.k_poly_match == rep.k_poly_match);
    REQUIRE(back.braces.size() == rep.braces.size());
    for (std::size_t i = 0; i < back.braces.size(); ++i) {
        CHECK(back.braces[i].rebuilt_m == rep.braces[i].rebuilt_m);
        CHECK(back.braces[i].shift == rep.braces[i].shift);
        CHECK(back.braces[i].embedded_denominator == rep.braces[i].embedded_denominator);
        CHECK(back.braces[i].realized_denominator == rep.braces[i].realized_denominator);
        CHECK(back.braces[i].match == rep.braces[i].match);
    }
    CHECK(back.invariants_match());
    CHECK(back.rebuilt.spec.h_presentation == rep.rebuilt.spec.h_presentation);

    CHECK_THROWS_AS(round_trip_from_json(json::object()), usage_error);
}

TEST_CASE("malformed documents raise usage errors, not crashes") {
    CHECK_THROWS_AS(spec_from_json(json::parse("{\"h_presentation\": 3}")), usage_error);
    CHECK_THROWS_AS(certificate_from_json(json::parse("{}")), usage_error);
    CHECK_THROWS_AS(decomposition_from_json(json::parse("[1,2]")), usage_error);
    CHECK_THROWS_AS(theta_from_json(json::parse("{\"multiple\": true}")), usage_error);
    json shape = json::parse(R"({"rows": 9999999, "cols": 2, "data": []})");
    CHECK_THROWS_AS(int_matrix_from_json(shape), usage_error);
}
