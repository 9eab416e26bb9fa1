#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dimforge/perron.hpp"

using namespace dimforge;

namespace {

int_poly P(std::initializer_list<long long> c) {
    std::vector<Int> v;
    for (long long x : c) v.emplace_back(x);
    return int_poly(std::move(v));
}

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

// 6x6 integer matrix with negative entries whose third power is strictly
// positive; dominant eigenvalue 15625 with eigenvector (41,12,24,12,24,24)^t.
int_matrix mixed_sign_primitive() {
    return M({{5125, 425, 9825, -9928, 20178, -7314},
              {1500, 1920, 1080, 2820, 180, 1620},
              {3000, 3840, 2160, 5640, 360, 3240},
              {1500, 3147, -147, 6873, -3873, 4260},
              {3000, 3840, 2160, 5640, 360, 3240},
              {3000, 4906, 1094, 9160, -3160, 5533}});
}

// Exact check of m v = lambda v over the eigenvalue field.
void check_eigenvector(const int_matrix& m, const weak_pf_record& rep,
                       const std::vector<nf_element>& v) {
    nf_element lam = rep.field != nullptr ? nf_element::generator(rep.field)
                                          : nf_element(rep.lambda.rational_value());
    nf_matrix s = to_field(m, rep.field);
    for (int i = 0; i < m.rows(); ++i) {
        nf_element acc;
        for (int j = 0; j < m.cols(); ++j) acc += s.at(i, j) * v[static_cast<std::size_t>(j)];
        CHECK(acc == lam * v[static_cast<std::size_t>(i)]);
    }
}

errc thrown_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const domain_error& e) {
        return e.code();
    }
    FAIL("expected a domain error");
    return errc::check_failed;
}

} // namespace

TEST_CASE("combinatorial primitivity") {
    auto fib = is_primitive(M({{1, 1}, {1, 0}}));
    CHECK(fib.primitive);
    CHECK(fib.witness_exponent == 2);
    CHECK(fib.wielandt_bound == 2);

    CHECK(is_primitive(M({{2}})).witness_exponent == 1);
    CHECK_FALSE(is_primitive(M({{0}})).primitive);
    CHECK_FALSE(is_primitive(M({{0, 1}, {1, 0}})).primitive);
    CHECK_FALSE(is_primitive(M({{0, 1}, {1, 0}})).witness_exponent.has_value());
    CHECK_FALSE(is_primitive(int_matrix::identity(2)).primitive);

    // Extremal digraph attaining the Wielandt exponent (n-1)^2 + 1.
    int_matrix w = M({{0, 1, 0}, {0, 0, 1}, {1, 1, 0}});
    auto rep = is_primitive(w);
    CHECK(rep.primitive);
    CHECK(rep.witness_exponent == 5);
    CHECK(rep.wielandt_bound == 5);

    CHECK(thrown_code([] { is_primitive(M({{-1}})); }) == errc::negative_entries);
    CHECK_THROWS_AS(is_primitive(int_matrix(2, 3)), domain_error);
}

TEST_CASE("positivity witness on exact powers") {
    CHECK(positivity_witness(M({{1, 1}, {1, 4}})) == 1);
    CHECK(positivity_witness(M({{1, 1}, {1, 0}})) == 2);
    CHECK(positivity_witness(M({{0, 1}, {1, 0}})) == std::nullopt);

    // Eventually positive despite a negative entry.
    CHECK(positivity_witness(M({{-1, 3}, {3, 2}})) == 2);

    budget tiny;
    tiny.positivity_power = 1;
    CHECK(positivity_witness(M({{1, 1}, {1, 0}}), tiny) == std::nullopt);
}

TEST_CASE("weak Perron-Frobenius analysis") {
    SECTION("golden symmetric matrix") {
        auto rep = weak_pf_data(M({{1, 1}, {1, 4}}));
        REQUIRE(rep.has_value());
        CHECK(rep->char_polynomial == P({3, -5, 1}));
        CHECK(rep->eigen_factor == P({3, -5, 1}));
        CHECK(rep->multiplicity_one);
        CHECK(rep->dominant);
        REQUIRE(rep->field != nullptr);
        nf_element lam = nf_element::generator(rep->field);
        REQUIRE(rep->right.size() == 2);
        CHECK(rep->right[0] == nf_element(1));
        CHECK(rep->right[1] == lam - nf_element(1));
        CHECK(rep->left == rep->right);
        CHECK(rep->positive_right);
        CHECK(rep->positive_left);
        CHECK(rep->eventually_positive());
        check_eigenvector(M({{1, 1}, {1, 4}}), *rep, rep->right);
    }
    SECTION("fibonacci matrix") {
        auto rep = weak_pf_data(M({{1, 1}, {1, 0}}));
        REQUIRE(rep.has_value());
        CHECK(rep->char_polynomial == P({-1, -1, 1}));
        CHECK(rep->eventually_positive());
        check_eigenvector(M({{1, 1}, {1, 0}}), *rep, rep->right);
        check_eigenvector(M({{1, 1}, {1, 0}}).transpose(), *rep, rep->left);
    }
    SECTION("upper triangular with a zero right eigenvector entry") {
        auto rep = weak_pf_data(M({{5, 2}, {0, 4}}));
        REQUIRE(rep.has_value());
        CHECK(rep->lambda.rational_value() == 5);
        CHECK(rep->multiplicity_one);
        CHECK(rep->dominant);
        REQUIRE(rep->right.size() == 2);
        CHECK(rep->right[0] == nf_element(1));
        CHECK(rep->right[1] == nf_element(0));
        CHECK(rep->left[0] == nf_element(1));
        CHECK(rep->left[1] == nf_element(2));
        CHECK(rep->positive_left);
        CHECK_FALSE(rep->positive_right);
        CHECK_FALSE(rep->eventually_positive());
    }
    SECTION("negative entry but eventually positive") {
        auto rep = weak_pf_data(M({{-1, 3}, {3, 2}}));
        REQUIRE(rep.has_value());
        CHECK(rep->eventually_positive());
    }
    SECTION("six by six with negative entries") {
        auto rep = weak_pf_data(mixed_sign_primitive());
        REQUIRE(rep.has_value());
        CHECK(rep->lambda.rational_value() == 15625);
        CHECK(rep->eventually_positive());
        CHECK(positivity_witness(mixed_sign_primitive()) == 3);
    }
    SECTION("swap matrix is simple at the top but not dominant") {
        auto rep = weak_pf_data(M({{0, 1}, {1, 0}}));
        REQUIRE(rep.has_value());
        CHECK(rep->lambda.rational_value() == 1);
        CHECK(rep->multiplicity_one);
        CHECK_FALSE(rep->dominant);
        CHECK(rep->positive_right);
        CHECK_FALSE(rep->eventually_positive());
    }
    SECTION("identity has a repeated dominant root") {
        auto rep = weak_pf_data(int_matrix::identity(2));
        REQUIRE(rep.has_value());
        CHECK(rep->lambda.rational_value() == 1);
        CHECK_FALSE(rep->multiplicity_one);
        CHECK(rep->dominant);
        CHECK(rep->right.empty());
        CHECK_FALSE(rep->eventually_positive());
    }
    SECTION("three-cycle ties against complex roots of modulus one") {
        auto rep = weak_pf_data(M({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}));
        REQUIRE(rep.has_value());
        CHECK(rep->multiplicity_one);
        CHECK_FALSE(rep->dominant);
    }
    SECTION("diagonal matrix has weak PF but a zero eigenvector entry") {
        auto rep = weak_pf_data(M({{1, 0}, {0, 2}}));
        REQUIRE(rep.has_value());
        CHECK(rep->field == nullptr);
        CHECK(rep->lambda.rational_value() == 2);
        CHECK(rep->multiplicity_one);
        CHECK(rep->dominant);
        CHECK_FALSE(rep->positive_right);
        CHECK_FALSE(rep->eventually_positive());
    }
    SECTION("one by one") {
        auto pos = weak_pf_data(M({{3}}));
        REQUIRE(pos.has_value());
        CHECK(pos->eventually_positive());
        CHECK_FALSE(weak_pf_data(M({{-2}})).has_value());
    }
    SECTION("rotation-like matrix has no real eigenvalue") {
        CHECK_FALSE(weak_pf_data(M({{0, -1}, {1, 0}})).has_value());
    }
}

TEST_CASE("primitivity routes agree on random non-negative matrices") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + static_cast<int>(rng() % 2);
        std::uniform_int_distribution<long long> d(0, 2);
        int_matrix a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a.at(i, j) = d(rng);
        bool comb = is_primitive(a).primitive;
        auto rep = weak_pf_data(a);
        CHECK(comb == (rep.has_value() && rep->eventually_positive()));
        if (rep.has_value() && rep->multiplicity_one) {
            check_eigenvector(a, *rep, rep->right);
            check_eigenvector(a.transpose(), *rep, rep->left);
        }
        if (comb) {
            auto wit = positivity_witness(a);
            REQUIRE(wit.has_value());
            CHECK(*wit >= 1);
        }
    }
}

TEST_CASE("all weak PF flags imply a strictly positive power") {
    std::mt19937_64 rng(77);
    int found = 0;
    for (int trial = 0; trial < 400 && found < 25; ++trial) {
        int n = 2 + static_cast<int>(rng() % 2);
        std::uniform_int_distribution<long long> d(-2, 3);
        int_matrix a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a.at(i, j) = d(rng);
        std::optional<weak_pf_record> rep;
        try {
            rep = weak_pf_data(a);
        } catch (const domain_error& e) {
            REQUIRE(e.code() == errc::budget_exceeded);
            continue;
        }
        if (!rep.has_value() || !rep->eventually_positive()) continue;
        ++found;
        CHECK(positivity_witness(a).has_value());
    }
    CHECK(found >= 25);
}

TEST_CASE("eigenvector entries span the eigenvalue field") {
    SECTION("degree two") {
        auto rep = eigenvector_spans_field(M({{1, 1}, {1, 0}}));
        CHECK(rep.spans);
        REQUIRE(rep.eigenvector.size() == 2);
        CHECK(rep.eigenvector[0] == nf_element(1));
        CHECK(rep.representative == rep.eigenvector);
        // lambda is the golden ratio: x^2 - x - 1.
        CHECK(rep.lambda.min_poly() == P({-1, -1, 1}));
    }
    SECTION("degree one is trivial") {
        CHECK(eigenvector_spans_field(M({{2}})).spans);
        CHECK(eigenvector_spans_field(M({{2, 1}, {1, 2}})).spans);
    }
    SECTION("mixed-sign primitive matrix with rational dominant root") {
        auto rep = eigenvector_spans_field(mixed_sign_primitive());
        CHECK(rep.spans);
        CHECK(rep.lambda.rational_value() == 15625);
        // First-coordinate-one normalization of (41,12,24,12,24,24)^t.
        REQUIRE(rep.eigenvector.size() == 6);
        CHECK(rep.eigenvector[1] == nf_element(make_rat(Int(12), Int(41))));
        CHECK(rep.eigenvector[5] == nf_element(make_rat(Int(24), Int(41))));
    }
    SECTION("non-primitive input is rejected") {
        CHECK(thrown_code([] { eigenvector_spans_field(M({{0, 1}, {1, 0}})); }) == errc::not_primitive);
        CHECK(thrown_code([] { eigenvector_spans_field(M({{5, 2}, {0, 4}})); }) == errc::not_primitive);
    }
}

TEST_CASE("induced quotient") {
    int_matrix a = M({{1, 2, 2}, {1, 4, 0}, {1, 0, 4}});
    int_matrix sub(3, 1);
    sub.at(0, 0) = -4;
    sub.at(1, 0) = 1;
    sub.at(2, 0) = 1;

    SECTION("pinned complement reproduces the reference basis") {
        int_matrix pins(3, 2);
        pins.at(0, 0) = 1;
        pins.at(1, 1) = 1;
        auto q = induced_quotient(a, sub, pins);
        CHECK(q.quotient == M({{5, 2}, {0, 4}}));
        CHECK(q.restriction == M({{0}}));
        CHECK(q.mixing == M({{1, 0}}));
        CHECK(is_unimodular(q.basis));
        CHECK(quotient_matrix(a, sub, pins) == M({{5, 2}, {0, 4}}));
    }
    SECTION("default complement gives a conjugate quotient") {
        auto q = induced_quotient(a, sub);
        CHECK(char_poly(q.quotient) == P({20, -9, 1}));
        CHECK(char_poly(q.restriction) == P({0, 1}));
    }
    SECTION("functoriality under matrix powers") {
        int_matrix pins(3, 2);
        pins.at(0, 0) = 1;
        pins.at(1, 1) = 1;
        CHECK(quotient_matrix(a * a, sub, pins) == quotient_matrix(a, sub, pins) * quotient_matrix(a, sub, pins));
        CHECK(quotient_matrix(a * a, sub) == quotient_matrix(a, sub) * quotient_matrix(a, sub));
    }
    SECTION("degenerate sublattices") {
        auto whole = induced_quotient(a, int_matrix::identity(3));
        CHECK(whole.restriction == a);
        CHECK(whole.quotient.rows() == 0);
        auto none = induced_quotient(a, int_matrix(3, 0));
        CHECK(none.quotient == a);
    }
    SECTION("non-invariant sublattice is rejected") {
        int_matrix e2(2, 1);
        e2.at(1, 0) = 1;
        CHECK(thrown_code([&] { induced_quotient(M({{1, 1}, {0, 1}}), e2); }) == errc::not_invariant);
    }
    SECTION("non-pure sublattice is rejected") {
        int_matrix dbl(2, 1);
        dbl.at(0, 0) = 2;
        CHECK(thrown_code([&] { induced_quotient(int_matrix::identity(2), dbl); }) == errc::not_pure);
    }
}

TEST_CASE("similarity to a primitive matrix") {
    SECTION("golden failing quotient") {
        auto rep = similarity_to_primitive_check(M({{5, 2}, {0, 4}}));
        CHECK(rep.verdict == similarity_verdict::fail);
        CHECK(rep.right == std::vector<Int>{1, 0});
        CHECK(rep.left == std::vector<Int>{1, 2});
        CHECK(rep.pairing == 1);
        CHECK(rep.dimension == 2);
        CHECK_FALSE(rep.conjugator.has_value());
    }
    SECTION("irrational dominant eigenvalue always passes") {
        auto rep = similarity_to_primitive_check(M({{1, 1}, {1, 4}}));
        CHECK(rep.verdict == similarity_verdict::not_applicable_irrational);
    }
    SECTION("integer eigenvalue with a large pairing passes") {
        auto rep = similarity_to_primitive_check(M({{2, 1}, {1, 2}}));
        CHECK(rep.verdict == similarity_verdict::pass);
        CHECK(rep.pairing == 2);
        CHECK(rep.right == std::vector<Int>{1, 1});
        CHECK(rep.left == std::vector<Int>{1, 1});
    }
    SECTION("diagonal matrix with distinct entries fails the pairing test") {
        auto rep = similarity_to_primitive_check(M({{3, 0}, {0, 2}}));
        CHECK(rep.verdict == similarity_verdict::fail);
        CHECK(rep.pairing == 1);
    }
    SECTION("no weak PF structure") {
        CHECK(similarity_to_primitive_check(M({{0, 1}, {1, 0}})).verdict == similarity_verdict::no_weak_pf);
        CHECK(similarity_to_primitive_check(int_matrix::identity(2)).verdict == similarity_verdict::no_weak_pf);
    }
    SECTION("one by one") {
        auto rep = similarity_to_primitive_check(M({{2}}));
        CHECK(rep.verdict == similarity_verdict::pass);
        CHECK(rep.pairing == 1);
    }
}
