#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dimforge/poly.hpp"

using namespace dimforge;

namespace {

int_poly random_poly(std::mt19937_64& rng, int max_deg, int bound) {
    std::uniform_int_distribution<int> d(-bound, bound);
    int deg = static_cast<int>(rng() % static_cast<unsigned>(max_deg + 1));
    std::vector<Int> c(static_cast<std::size_t>(deg) + 1);
    for (auto& v : c) v = d(rng);
    if (c.back() == 0) c.back() = 1;
    return int_poly(std::move(c));
}

} // namespace

TEST_CASE("poly arithmetic basics") {
    int_poly f({Int(3), Int(-5), Int(1)}); // x^2 - 5x + 3
    CHECK(f.degree() == 2);
    CHECK(f.is_monic());
    CHECK(f.eval(Int(5)) == 3);
    CHECK(f.derivative() == int_poly({Int(-5), Int(2)}));

    int_poly g({Int(-1), Int(1)}); // x - 1
    CHECK(f * g == int_poly({Int(-3), Int(8), Int(-6), Int(1)}));
    CHECK((f + g).coeff(0) == 2);
    CHECK((f - f).is_zero());
    CHECK(f.shift_up(2).degree() == 4);
    CHECK(f.shift_up(2).shift_down(2) == f);
    CHECK(f.compose_power(3) == int_poly({Int(3), Int(0), Int(0), Int(-5), Int(0), Int(0), Int(1)}));
}

TEST_CASE("poly division") {
    int_poly f({Int(-3), Int(8), Int(-6), Int(1)});
    int_poly d({Int(-1), Int(1)});
    auto [q, r] = f.divmod(d);
    CHECK(r.is_zero());
    CHECK(q == int_poly({Int(3), Int(-5), Int(1)}));
    CHECK(div_exact_poly(f, d) == q);

    auto [q2, r2] = int_poly({Int(1), Int(0), Int(1)}).divmod(d);
    CHECK(q2 == int_poly({Int(1), Int(1)}));
    CHECK(r2 == int_poly({Int(2)}));
}

TEST_CASE("gcd and primitive part") {
    CHECK(primitive_part(int_poly({Int(-4), Int(-6)})) == int_poly({Int(2), Int(3)}));
    int_poly a({Int(-1), Int(0), Int(1)});  // (x-1)(x+1)
    int_poly b({Int(-1), Int(2), Int(-1)}); // -(x-1)^2
    CHECK(gcd_poly(a, b) == int_poly({Int(-1), Int(1)}));

    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 60; ++trial) {
        int_poly f = random_poly(rng, 4, 6);
        int_poly g = random_poly(rng, 4, 6);
        int_poly h = random_poly(rng, 3, 4);
        int_poly d = gcd_poly(f * h, g * h);
        // common factor h must divide the gcd
        CHECK(to_rational(d).divmod(monic_over_q(h)).second.is_zero());
        // gcd divides both products
        CHECK(to_rational(f * h).divmod(monic_over_q(d)).second.is_zero());
        CHECK(to_rational(g * h).divmod(monic_over_q(d)).second.is_zero());
    }
}

TEST_CASE("squarefree decomposition") {
    // f = (x-1)^2 (x+2)
    int_poly f = int_poly({Int(-1), Int(1)}) * int_poly({Int(-1), Int(1)}) * int_poly({Int(2), Int(1)});
    auto parts = squarefree_decomposition(f);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0] == std::make_pair(int_poly({Int(2), Int(1)}), 1));
    CHECK(parts[1] == std::make_pair(int_poly({Int(-1), Int(1)}), 2));

    std::mt19937_64 rng(555);
    for (int trial = 0; trial < 40; ++trial) {
        int_poly g = random_poly(rng, 3, 4);
        if (g.degree() < 1) continue;
        auto sq = squarefree_decomposition(g * g);
        int_poly rebuilt({Int(1)});
        for (const auto& [p, e] : sq) rebuilt = rebuilt * p.pow(static_cast<unsigned long>(e));
        CHECK(primitive_part(rebuilt) == primitive_part(g * g));
        for (const auto& [p, e] : sq) CHECK(gcd_poly(p, p.derivative()).degree() == 0);
    }
}

TEST_CASE("companion matrix") {
    int_poly f({Int(3), Int(-5), Int(1)});
    auto c = f.companion();
    REQUIRE(c.rows() == 2);
    CHECK(c.at(0, 0) == 0);
    CHECK(c.at(0, 1) == -3);
    CHECK(c.at(1, 0) == 1);
    CHECK(c.at(1, 1) == 5);
    CHECK_THROWS_AS(int_poly({Int(1), Int(2)}).companion(), domain_error);
}
