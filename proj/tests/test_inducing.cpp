#include <catch2/catch_amalgamated.hpp>

#include "ergolab/ergolab.hpp"

using namespace ergolab;
using Catch::Approx;

TEST_CASE("doubling first-return map on [0, 1/2)", "[inducing]") {
    auto dbl = make_map("doubling");
    auto ind = first_return_partition(dbl, {0.0, 0.5}, 30);
    SECTION("return-word enumeration: m(R = n) = 2^{-(n+1)}") {
        REQUIRE(ind.cells.size() == 30);
        std::vector<double> by_r(31, 0.0);
        for (auto& c : ind.cells) by_r[std::size_t(c.R)] += c.mass;
        for (int n = 1; n <= 20; ++n)
            CHECK(by_r[std::size_t(n)] == Approx(std::pow(2.0, -(n + 1))).margin(1e-14));
        auto tail = tail_series(ind);
        for (int n = 1; n <= 20; ++n)
            CHECK(tail.values[std::size_t(n - 1)] == Approx(std::pow(2.0, -(n + 1))).margin(1e-12));
    }
    SECTION("mass conservation") {
        double total = ind.residual;
        for (auto& c : ind.cells) total += c.mass;
        CHECK(total == Approx(0.5).margin(1e-9));
    }
    SECTION("tail is non-increasing and complete") {
        auto tail = tail_series(ind);
        for (std::size_t i = 1; i < tail.values.size(); ++i)
            REQUIRE(tail.values[i] <= tail.values[i - 1] + 1e-15);
        CHECK(ind.residual < 1e-6);
        CHECK(ind.tail_complete);
    }
    SECTION("non-dyadic base fails the Markov check") {
        CHECK_THROWS_AS(first_return_partition(dbl, {0.0, 0.3}, 10), numeric_error);
    }
}

TEST_CASE("doubling induced map satisfies Definition 1 exactly", "[inducing]") {
    auto dbl = make_map("doubling");
    auto ind = first_return_partition(dbl, {0.0, 0.5}, 40);
    auto rep = verify_gibbs_markov(ind, 8);
    CHECK(rep.markov_pass);
    CHECK(rep.lambda_hat == 0.5); // attained on the R = 1 cell
    CHECK(rep.K_hat == 0.0);      // linear branches: distortion ratios exactly 1
    CHECK(rep.expansion_pass);
    CHECK(rep.distortion_pass);
    auto kac = kac_check_lebesgue(ind);
    CHECK(kac.m_integral == Approx(1.0).margin(1e-9)); // sum n 2^{-(n+1)} = 1
    CHECK(kac.mu_integral == Approx(1.0).margin(1e-9)); // Kac with mu = Lebesgue
}

TEST_CASE("artificially merged cells are flagged, not thrown", "[inducing]") {
    auto dbl = make_map("doubling");
    auto ind = first_return_partition(dbl, {0.0, 0.5}, 20);
    REQUIRE(ind.cells.size() >= 2);
    InducedMap bad = ind;
    bad.cells[0].cell.hi = bad.cells[1].cell.hi; // swallow the neighbour
    bad.cells.erase(bad.cells.begin() + 1);
    auto rep = verify_gibbs_markov(bad, 4);
    CHECK_FALSE(rep.markov_pass);
    CHECK(rep.markov_resid > 1e-9);
    CHECK_FALSE(rep.failing_cells.empty());
}

TEST_CASE("intermittent first-return map on (1/2, 1]", "[inducing]") {
    auto lsv = make_map("intermittent", {{"gamma", 0.5}});
    SECTION("cell endpoints follow the backward orbit of 1/2") {
        auto ind = first_return_partition(lsv, {0.5, 1.0}, 24);
        // independent recursion: a_1 = 1/2, f(a_{n+1}) = a_n under the left branch
        std::vector<double> a{0.5};
        for (int n = 1; n < 24; ++n) a.push_back(lsv_left_inverse(a.back(), 0.5));
        for (double an : a) CHECK(lsv_forward(lsv_left_inverse(an, 0.5), 0.5) == Approx(an).margin(1e-12));
        std::vector<const InducedCell*> by_r(25, nullptr);
        for (auto& c : ind.cells) by_r[std::size_t(c.R)] = &c;
        // R = 1 cell is (3/4, 1]; R = n cell is the right-branch preimage of (a_{n-1}, a_{n-2}]
        REQUIRE(by_r[1]);
        CHECK(by_r[1]->cell.lo == Approx(0.75).margin(1e-12));
        CHECK(by_r[1]->cell.hi == Approx(1.0).margin(1e-12));
        for (int n = 2; n <= 20; ++n) {
            REQUIRE(by_r[std::size_t(n)]);
            CHECK(by_r[std::size_t(n)]->cell.lo ==
                  Approx((a[std::size_t(n - 1)] + 1) / 2).margin(1e-12));
            CHECK(by_r[std::size_t(n)]->cell.hi ==
                  Approx((a[std::size_t(n - 2)] + 1) / 2).margin(1e-12));
        }
    }
    SECTION("tail exponent -1/gamma = -2 and a finite return-time integral") {
        auto ind = first_return_partition(lsv, {0.5, 1.0}, 10000);
        auto tail = tail_series(ind);
        std::vector<double> ns, vs;
        for (std::size_t i = 0; i < tail.ns.size(); ++i)
            if (tail.ns[i] >= 100) {
                ns.push_back(tail.ns[i]);
                vs.push_back(tail.values[i]);
            }
        auto lf = loglog_fit(ns, vs);
        CHECK(lf.slope == Approx(-2.0).margin(0.2));
        CHECK(lf.r2 > 0.999); // the fitted law dominates the tail
        CHECK(lf.residual_max < 0.2);
        DecaySeries window;
        window.ns = ns;
        window.values = vs;
        CHECK(fit_rate(window, "polynomial").beta == Approx(2.0).margin(0.2));
        CHECK(ind.residual < 1e-6);
        auto kac = kac_check(ind);
        CHECK(std::isfinite(kac.m_integral));
        CHECK(kac.m_integral > 1.0); // heavier than the doubling tail
    }
    SECTION("Definition 1 verification") {
        auto ind = first_return_partition(lsv, {0.5, 1.0}, 300);
        auto rep = verify_gibbs_markov(ind, 6);
        CHECK(rep.markov_pass);
        CHECK(rep.lambda_hat < 1.0);
        CHECK(std::isfinite(rep.K_hat));
        CHECK(rep.K_hat > 0.0);
        CHECK(rep.margin > 0.0);
        CHECK(rep.pass_all());
    }
}

TEST_CASE("gamma = 0.9: integrable return time with a slow tail", "[inducing]") {
    auto lsv = make_map("intermittent", {{"gamma", 0.9}});
    auto ind = first_return_partition(lsv, {0.5, 1.0}, 5000);
    auto tail = tail_series(ind);
    std::vector<double> ns, vs;
    for (std::size_t i = 0; i < tail.ns.size(); ++i)
        if (tail.ns[i] >= 500) {
            ns.push_back(tail.ns[i]);
            vs.push_back(tail.values[i]);
        }
    CHECK(loglog_fit(ns, vs).slope == Approx(-1.0 / 0.9).margin(0.15));
    // the resolved mass integrates R to a finite partial value; the tail is
    // not yet complete at this depth and kac_check says so
    CHECK_FALSE(ind.tail_complete);
    CHECK_THROWS_AS(kac_check(ind), precondition_error);
    double partial = 0;
    for (auto& c : ind.cells) partial += double(c.R) * c.mass;
    CHECK(std::isfinite(partial));
    CHECK(partial > 1.0);
}

TEST_CASE("tail exponent is consistent with the correlation exponent", "[inducing]") {
    // correlation exponent beta-hat and tail exponent: tail >= beta - 1 - slack
    auto lsv = make_map("intermittent", {{"gamma", 0.5}});
    Observable x = coordinate_observable({0, 1});
    auto series = correlation_series(lsv, x, x, 32, UlamMethod{4096});
    std::vector<double> ns, vs;
    for (std::size_t i = 0; i < series.ns.size(); ++i)
        if (series.ns[i] >= 4) {
            ns.push_back(series.ns[i]);
            vs.push_back(series.raw[i]);
        }
    double beta_hat = -loglog_fit(ns, vs).slope;
    auto ind = first_return_partition(lsv, {0.5, 1.0}, 2000);
    auto tail = tail_series(ind);
    std::vector<double> tns, tvs;
    for (std::size_t i = 0; i < tail.ns.size(); ++i)
        if (tail.ns[i] >= 50) {
            tns.push_back(tail.ns[i]);
            tvs.push_back(tail.values[i]);
        }
    double tail_exp = -loglog_fit(tns, tvs).slope;
    CHECK(tail_exp >= beta_hat - 1.0 - 0.3);
}

TEST_CASE("inducing preconditions", "[inducing]") {
    auto dbl = make_map("doubling");
    CHECK_THROWS_AS(first_return_partition(dbl, {0.0, 0.5}, 0), precondition_error);
    CHECK_THROWS_AS(first_return_partition(dbl, {-0.2, 0.5}, 10), precondition_error);
    CHECK_THROWS_AS(first_return_partition(make_map("viana"), {0.0, 0.5}, 10), precondition_error);
}
