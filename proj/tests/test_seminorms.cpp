#include <catch2/catch_amalgamated.hpp>

#include "ergolab/ergolab.hpp"

using namespace ergolab;
using Catch::Approx;

namespace {

GridFunction indicator_half(int N) {
    Grid g = Grid::uniform(0, 1, N);
    GridFunction f(g);
    for (int i = 0; i < N; ++i) f.v[std::size_t(i)] = g.center(i) <= 0.5 ? 1.0 : 0.0;
    return f;
}

} // namespace

TEST_CASE("BV seminorm", "[seminorms]") {
    CHECK(seminorm_bv(indicator_half(512)) == Approx(1.0)); // one interior jump
    GridFunction c(Grid::uniform(0, 1, 64), std::vector<double>(64, 2.5));
    CHECK(seminorm_bv(c) == 0.0);
}

TEST_CASE("quasi-Hölder oscillation seminorm", "[seminorms]") {
    SECTION("constant function has zero seminorm on the circle") {
        GridFunction c(Grid::uniform(0, 1, 64), std::vector<double>(64, 2.5));
        CHECK(seminorm_quasi_holder(c, 0.3, 0.05, Ambient::periodic) == 0.0);
        // under the zero extension the support boundary itself oscillates:
        // int osc = |c| * 4 eps, sup attained at eps0
        CHECK(seminorm_quasi_holder(c, 0.3, 0.05) ==
              Approx(4 * 2.5 * std::pow(0.05, 0.7)).margin(1e-9));
    }
    SECTION("indicator of [0, 1/2]: two osc-contributing boundary points") {
        // int osc = 4 eps (windows around 0 and 1/2), sup at eps0:
        // eps0^{-1/2} * 4 eps0 = 4 sqrt(0.1); the value is the same under
        // both ambient conventions (the jump at 0 wraps on the circle)
        CHECK(seminorm_quasi_holder(indicator_half(512), 0.5, 0.1) ==
              Approx(4.0 * std::sqrt(0.1)).margin(1e-9));
        CHECK(seminorm_quasi_holder(indicator_half(512), 0.5, 0.1, Ambient::periodic) ==
              Approx(4.0 * std::sqrt(0.1)).margin(1e-9));
    }
    SECTION("parameter preconditions") {
        CHECK_THROWS_AS(seminorm_quasi_holder(indicator_half(16), 1.5, 0.1), precondition_error);
        CHECK_THROWS_AS(seminorm_quasi_holder(indicator_half(16), 0.5, 0.0), precondition_error);
        CHECK_THROWS_AS(seminorm(indicator_half(16), "nonsense"), precondition_error);
    }
}

TEST_CASE("BV seminorm is subadditive and absolutely homogeneous", "[seminorms]") {
    Rng rng(5150);
    Grid g = Grid::uniform(0, 1, 128);
    for (int t = 0; t < 50; ++t) {
        GridFunction f(g), h(g);
        for (int i = 0; i < g.n; ++i) {
            f.v[std::size_t(i)] = rng.uniform(-1, 1);
            h.v[std::size_t(i)] = rng.uniform(-1, 1);
        }
        GridFunction sum(g);
        for (int i = 0; i < g.n; ++i) sum.v[std::size_t(i)] = f.v[std::size_t(i)] + h.v[std::size_t(i)];
        REQUIRE(seminorm_bv(sum) <= seminorm_bv(f) + seminorm_bv(h) + 1e-12);
        double c = rng.uniform(-3, 3);
        GridFunction cf(g);
        for (int i = 0; i < g.n; ++i) cf.v[std::size_t(i)] = c * f.v[std::size_t(i)];
        REQUIRE(seminorm_bv(cf) == Approx(std::fabs(c) * seminorm_bv(f)).margin(1e-10));
    }
}

TEST_CASE("Lasota-Yorke fit", "[seminorms]") {
    SECTION("doubling contracts variation by 1/2 at n0 = 1") {
        auto fit = lasota_yorke_fit(make_map("doubling"), 512, 200, 42);
        CHECK(fit.n0 == 1);
        CHECK(fit.alpha_hat == Approx(0.5).margin(0.05));
    }
    SECTION("tent map contracts at n0 = 1") {
        auto fit = lasota_yorke_fit(make_map("tent"), 512, 200, 42);
        CHECK(fit.n0 == 1);
        CHECK(fit.alpha_hat < 1.0);
    }
    SECTION("rotation never contracts") {
        // omega = 1/4 aligned with the grid keeps the operator a permutation
        auto rot = make_map("rotation", {{"omega", 0.25}});
        CHECK_THROWS_AS(lasota_yorke_fit(rot, 1024, 200, 42), numeric_error);
    }
}

TEST_CASE("Saussol's multidimensional condition", "[seminorms]") {
    SECTION("worked values") {
        auto r = saussol_condition(0.02, 0.5, 4.0, 2);
        CHECK(r.value == Approx(0.02 + 0.0).margin(1.0)); // sanity; exact below
        double expect = std::pow(0.02, 0.5) + (4 * 0.02 / 0.98) * 4.0 * (2.0 / std::acos(-1.0));
        CHECK(r.value == Approx(expect).margin(1e-12));
        CHECK(r.value == Approx(0.3493).margin(5e-4));
        CHECK(r.pass);
        auto r2 = saussol_condition(0.2, 0.5, 4.0, 2);
        CHECK(r2.value == Approx(2.99).margin(0.01));
        CHECK_FALSE(r2.pass);
    }
    SECTION("value -> 0 as s -> 0") {
        double prev = 1e9;
        for (double s : {1e-2, 1e-4, 1e-6, 1e-9}) {
            auto r = saussol_condition(s, 0.5, 4.0, 2);
            CHECK(r.value < prev);
            prev = r.value;
        }
        CHECK(prev < 1e-4);
        CHECK(saussol_condition(1e-9, 0.5, 4.0, 2).pass);
    }
    SECTION("unit ball volumes") {
        CHECK(unit_ball_volume(0) == Approx(1.0));
        CHECK(unit_ball_volume(1) == Approx(2.0));
        CHECK(unit_ball_volume(2) == Approx(std::acos(-1.0)));
    }
    SECTION("preconditions") {
        CHECK_THROWS_AS(saussol_condition(0.0, 0.5, 4.0, 2), precondition_error);
        CHECK_THROWS_AS(saussol_condition(0.1, 0.5, 0.5, 2), precondition_error);
        CHECK_THROWS_AS(saussol_condition(0.1, 0.5, 4.0, 0), precondition_error);
    }
}
