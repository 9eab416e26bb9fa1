#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <utility>
#include <vector>

#include "dimforge/factor.hpp"

using namespace dimforge;

namespace {

int_poly P(std::initializer_list<long long> c) {
    std::vector<Int> v;
    for (long long x : c) v.emplace_back(x);
    return int_poly(std::move(v));
}

// Pool of polynomials known to be irreducible over Q (degree <= 4, primitive,
// positive lead, pairwise distinct).
const std::vector<int_poly>& irreducible_pool() {
    static const std::vector<int_poly> pool = {
        P({0, 1}),            // x
        P({-1, 1}),           // x - 1
        P({1, 1}),            // x + 1
        P({-2, 1}),           // x - 2
        P({3, 1}),            // x + 3
        P({-3, 2}),           // 2x - 3
        P({1, 0, 1}),         // x^2 + 1
        P({-2, 0, 1}),        // x^2 - 2
        P({-1, -1, 1}),       // x^2 - x - 1
        P({1, 1, 1}),         // x^2 + x + 1
        P({3, -5, 1}),        // x^2 - 5x + 3
        P({1, 2, 3}),         // 3x^2 + 2x + 1
        P({-2, 0, 0, 1}),     // x^3 - 2
        P({1, 1, 0, 1}),      // x^3 + x + 1
        P({1, 4, 0, 2}),      // 2x^3 + 4x + 1
        P({1, 0, 0, 0, 1}),   // x^4 + 1
    };
    return pool;
}

using factorization = std::vector<std::pair<int_poly, int>>;

factorization aggregate(std::vector<std::pair<int_poly, int>> raw) {
    factorization out;
    for (auto& [f, e] : raw) {
        bool found = false;
        for (auto& [g, m] : out)
            if (g == f) {
                m += e;
                found = true;
            }
        if (!found) out.emplace_back(f, e);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (detail_factor::poly_less(a.first, b.first)) return true;
        if (detail_factor::poly_less(b.first, a.first)) return false;
        return a.second < b.second;
    });
    return out;
}

} // namespace

TEST_CASE("factor_rational fixed cases") {
    SECTION("irreducible quadratic") {
        int_poly f = P({3, -5, 1});
        auto fs = factor_rational(f);
        REQUIRE(fs.size() == 1);
        CHECK(fs[0].first == f);
        CHECK(fs[0].second == 1);
        CHECK(is_irreducible(f));
    }
    SECTION("repeated linear factors") {
        int_poly f = P({-1, 1}) * P({-1, 1}) * P({2, 1});
        auto fs = factor_rational(f);
        REQUIRE(fs.size() == 2);
        CHECK(fs[0].first == P({-1, 1}));
        CHECK(fs[0].second == 2);
        CHECK(fs[1].first == P({2, 1}));
        CHECK(fs[1].second == 1);
        CHECK_FALSE(is_irreducible(f));
    }
    SECTION("content and sign are dropped") {
        auto fs = factor_rational(P({-6, 0, 6})); // 6x^2 - 6
        REQUIRE(fs.size() == 2);
        CHECK(fs[0].first == P({-1, 1}));
        CHECK(fs[1].first == P({1, 1}));
        auto neg = factor_rational(P({6, 0, -6}));
        CHECK(neg == fs);
    }
    SECTION("irreducible but reducible modulo every prime") {
        CHECK(is_irreducible(P({1, 0, 0, 0, 1})));
    }
    SECTION("sixth cyclotomic split") {
        auto fs = factor_rational(P({-1, 0, 0, 0, 0, 0, 1})); // x^6 - 1
        REQUIRE(fs.size() == 4);
        CHECK(fs[0].first == P({-1, 1}));
        CHECK(fs[1].first == P({1, 1}));
        CHECK(fs[2].first == P({1, -1, 1}));
        CHECK(fs[3].first == P({1, 1, 1}));
        for (const auto& [f, e] : fs) CHECK(e == 1);
    }
    SECTION("non-monic input") {
        auto fs = factor_rational(P({0, -12, 0, 12})); // 12x^3 - 12x
        REQUIRE(fs.size() == 3);
        CHECK(fs[0].first == P({-1, 1}));
        CHECK(fs[1].first == P({0, 1}));
        CHECK(fs[2].first == P({1, 1}));
        CHECK(is_irreducible(P({1, 4, 0, 2})));
        CHECK(is_irreducible(P({-3, 2})));
    }
    SECTION("mixed multiplicities sort by degree first") {
        int_poly f = P({1, 0, 1}) * P({1, 0, 1}) * P({1, 0, 1}) * P({-2, 1}) * P({-2, 1});
        auto fs = factor_rational(f);
        REQUIRE(fs.size() == 2);
        CHECK(fs[0].first == P({-2, 1}));
        CHECK(fs[0].second == 2);
        CHECK(fs[1].first == P({1, 0, 1}));
        CHECK(fs[1].second == 3);
    }
    SECTION("degenerate inputs") {
        CHECK_THROWS_AS(factor_rational(int_poly()), domain_error);
        CHECK(factor_rational(P({7})).empty());
        CHECK_FALSE(is_irreducible(P({7})));
    }
}

TEST_CASE("factor_rational reconstructs random products") {
    std::mt19937_64 rng(20240811);
    const auto& pool = irreducible_pool();
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::pair<int_poly, int>> chosen;
        int count = 1 + static_cast<int>(rng() % 3);
        int_poly product = int_poly::constant(Int(1 + static_cast<long long>(rng() % 5)));
        if (rng() % 2) product = -product;
        for (int i = 0; i < count; ++i) {
            const int_poly& f = pool[rng() % pool.size()];
            int mult = 1 + static_cast<int>(rng() % 2);
            chosen.emplace_back(f, mult);
            for (int e = 0; e < mult; ++e) product = product * f;
        }
        auto expected = aggregate(std::move(chosen));
        auto got = factor_rational(product);
        REQUIRE(got == expected);

        int_poly rebuilt = int_poly::constant(Int(1));
        for (const auto& [f, e] : got)
            for (int i = 0; i < e; ++i) rebuilt = rebuilt * f;
        CHECK(rebuilt == primitive_part(product));
    }
}
