#include <catch2/catch_amalgamated.hpp>

#include "ergolab/ergolab.hpp"

using namespace ergolab;
using Catch::Approx;

TEST_CASE("Hölder norm estimation", "[correlation]") {
    SECTION("coordinate, alpha = 1: sup 1 plus ratio 1") {
        Observable phi = make_observable("id", [](const Point& p) { return p[0]; }, 1.0, {0, 1});
        CHECK(holder_norm(phi, 1.0, 2000, 3) == Approx(2.0).margin(1e-9));
    }
    SECTION("constant") {
        Observable phi = make_observable("c", [](const Point&) { return -1.75; }, 1.0, {0, 1});
        CHECK(holder_norm(phi, 0.5, 500, 3) == Approx(1.75).margin(1e-12));
    }
    SECTION("sqrt with alpha = 1/2: the ratio is maximized toward 0") {
        Observable phi = make_observable("sqrt", [](const Point& p) { return std::sqrt(p[0]); }, 0.5, {0, 1});
        CHECK(holder_norm(phi, 0.5, 2000, 3) == Approx(2.0).margin(1e-9));
    }
    SECTION("estimates are cached with provenance") {
        Observable phi = make_observable("id", [](const Point& p) { return p[0]; }, 1.0, {0, 1});
        holder_norm(phi, 1.0, 100, 3);
        CHECK(phi.norms_known());
        CHECK(phi.sup_prov == Provenance::estimated);
    }
}

TEST_CASE("doubling covariance oracle via Ulam", "[correlation]") {
    // symbolic oracle: int x (2^n x mod 1) dx = 1/4 + 2^{-n}/12
    auto dbl = make_map("doubling");
    Observable x = coordinate_observable({0, 1});
    auto series = correlation_series(dbl, x, x, 10, UlamMethod{1024});
    for (int n = 1; n <= 10; ++n)
        CHECK(series.raw[std::size_t(n - 1)] == Approx(std::pow(2.0, -n) / 12.0).margin(1e-3));
}

TEST_CASE("correlation against a constant test function vanishes", "[correlation]") {
    auto dbl = make_map("doubling");
    Observable x = coordinate_observable({0, 1});
    Observable one = constant_observable(1.0);
    auto series = correlation_series(dbl, x, one, 6, UlamMethod{256});
    for (double v : series.values) CHECK(std::fabs(v) <= 1e-13);
    Observable zero = constant_observable(0.0);
    CHECK_THROWS_AS(correlation_series(dbl, zero, x, 4, UlamMethod{64}), precondition_error);
}

TEST_CASE("ensemble correlation estimator", "[correlation]") {
    auto dbl = make_map("doubling");
    Observable x = coordinate_observable({0, 1});
    auto series = correlation_series(dbl, x, x, 10, EnsembleMethod{200000, 100, 5});
    SECTION("matches the symbolic oracle within Monte-Carlo error") {
        for (int n = 1; n <= 6; ++n) {
            double expect = std::pow(2.0, -n) / 12.0;
            CHECK(std::fabs(series.raw[std::size_t(n - 1)] - expect) <=
                  4 * series.se[std::size_t(n - 1)] * 1.5 /*norms*/ + 2e-4);
        }
    }
    SECTION("Cauchy-Schwarz sanity") {
        double sd2 = 1.0 / 12.0; // var of x under Lebesgue
        for (std::size_t i = 0; i < series.ns.size(); ++i)
            CHECK(series.raw[i] <= sd2 + 4 * series.se[i] * 1.5 + 1e-3);
    }
}

TEST_CASE("intermittent correlation decays polynomially", "[correlation]") {
    auto lsv = make_map("intermittent", {{"gamma", 0.5}});
    Observable x = coordinate_observable({0, 1});
    auto series = correlation_series(lsv, x, x, 32, UlamMethod{4096});
    std::vector<double> ns, vs;
    for (std::size_t i = 0; i < series.ns.size(); ++i)
        if (series.ns[i] >= 4) {
            ns.push_back(series.ns[i]);
            vs.push_back(series.raw[i]);
        }
    double slope = loglog_fit(ns, vs).slope;
    CHECK(slope >= -1.3);
    CHECK(slope <= -0.7);
}

TEST_CASE("rate-law fitting", "[correlation]") {
    SECTION("polynomial synthetic data") {
        DecaySeries s;
        for (int n = 1; n <= 60; ++n) {
            s.ns.push_back(n);
            s.values.push_back(std::pow(n, -2.0));
        }
        auto fit = fit_rate(s, "auto");
        CHECK(fit.family == RateFamily::polynomial);
        CHECK(fit.beta == Approx(2.0).margin(0.01));
    }
    SECTION("stretched synthetic data with off-grid theta = 1/3") {
        DecaySeries s;
        for (int n = 1; n <= 50; ++n) {
            s.ns.push_back(n);
            s.values.push_back(std::exp(-0.3 * std::pow(n, 1.0 / 3.0)));
        }
        auto fit = fit_rate(s, "stretched");
        CHECK(fit.tau == Approx(0.30).margin(0.02));
        CHECK(fit.theta == Approx(1.0 / 3.0).margin(0.05));
    }
    SECTION("noiseless round trips within 1%") {
        DecaySeries p, e, st;
        for (int n = 1; n <= 64; ++n) {
            p.ns.push_back(n);
            p.values.push_back(3.0 * std::pow(n, -2.5));
            e.ns.push_back(n);
            e.values.push_back(0.7 * std::exp(-0.7 * n));
            st.ns.push_back(n);
            st.values.push_back(std::exp(-0.5 * std::pow(n, 0.3)));
        }
        CHECK(fit_rate(p, "polynomial").beta == Approx(2.5).epsilon(0.01));
        CHECK(fit_rate(e, "exponential").tau == Approx(0.7).epsilon(0.01));
        auto fs = fit_rate(st, "stretched");
        CHECK(fs.tau == Approx(0.5).epsilon(0.01));
        CHECK(fs.theta == Approx(0.3).epsilon(0.01));
    }
    SECTION("noisy recovery within 3 standard errors") {
        Rng rng(77);
        double sigma = 0.05;
        DecaySeries s;
        std::vector<double> lx;
        for (int n = 1; n <= 100; ++n) {
            double g = std::sqrt(-2 * std::log(std::max(rng.uniform01(), 1e-300))) *
                       std::cos(2 * std::acos(-1.0) * rng.uniform01());
            s.ns.push_back(n);
            s.values.push_back(std::pow(n, -2.0) * std::exp(sigma * g));
            lx.push_back(std::log(double(n)));
        }
        double mx = mean(lx), sxx = 0;
        for (double v : lx) sxx += (v - mx) * (v - mx);
        double se_slope = sigma / std::sqrt(sxx);
        auto fit = fit_rate(s, "polynomial");
        CHECK(std::fabs(fit.beta - 2.0) <= 3 * se_slope);
    }
    SECTION("doubling covariance series is exponential with rate log 2") {
        auto dbl = make_map("doubling");
        Observable x = coordinate_observable({0, 1});
        auto series = correlation_series(dbl, x, x, 10, UlamMethod{1024});
        DecaySeries raw;
        raw.ns = series.ns;
        raw.values = series.raw;
        auto fit = fit_rate(raw, "auto");
        CHECK(fit.family == RateFamily::exponential);
        CHECK(fit.tau == Approx(std::log(2.0)).epsilon(0.05));
    }
    SECTION("insufficient points") {
        DecaySeries s;
        for (int n = 1; n <= 5; ++n) {
            s.ns.push_back(n);
            s.values.push_back(1.0 / n);
        }
        CHECK_THROWS_AS(fit_rate(s, "polynomial"), precondition_error);
    }
}

TEST_CASE("large-deviation series", "[correlation]") {
    auto dbl = make_map("doubling");
    Observable x = coordinate_observable({0, 1});
    auto ens = simulate_ensemble(dbl, 50000, 100, 13);
    SECTION("impossible deviations give the zero series") {
        auto s = ld_series(dbl, x, 1.5, {1, 5, 10}, ens); // eps > 2 ||phi||_inf
        for (double v : s.values) CHECK(v == 0.0);
    }
    SECTION("n = 1 matches the direct histogram tail") {
        double eps = 0.3;
        auto s = ld_series(dbl, x, eps, {1}, ens);
        double mean_phi = 0;
        for (auto& p : ens.points) mean_phi += p[0];
        mean_phi /= double(ens.points.size());
        double direct = 0;
        for (auto& p : ens.points) direct += (std::fabs(p[0] - mean_phi) > eps) ? 1 : 0;
        direct /= double(ens.points.size());
        CHECK(std::fabs(s.values[0] - direct) <= 2 * s.se[0] + 1e-12);
    }
    SECTION("monotone non-increasing in eps") {
        double prev = 2.0;
        for (double eps : {0.05, 0.1, 0.2, 0.3}) {
            auto s = ld_series(dbl, x, eps, {20}, ens);
            CHECK(s.values[0] <= prev + 1e-12);
            prev = s.values[0];
        }
    }
    SECTION("grid validation") {
        CHECK_THROWS_AS(ld_series(dbl, x, 0.1, {5, 5}, ens), precondition_error);
        CHECK_THROWS_AS(ld_series(dbl, x, 0.0, {5}, ens), precondition_error);
    }
}

TEST_CASE("hitting and expansion times", "[correlation]") {
    auto dbl = make_map("doubling");
    auto ens = simulate_ensemble(dbl, 20000, 50, 19);
    SECTION("constant Birkhoff averages never violate: tail identically 0") {
        auto ht = expansion_time(dbl, ens, -std::log(2.0), 64);
        CHECK(ht.censored == 0);
        for (double v : ht.tail.values) CHECK(v == 0.0);
    }
    SECTION("all points censored when the band always fails at N_max = 1") {
        Observable x = coordinate_observable({0, 1});
        BandRule rule;
        rule.kind = BandRule::abs_dev;
        rule.center = 10.0;
        rule.eps = 0.1;
        auto ht = hitting_times(dbl, x, rule, ens, 1);
        CHECK(ht.censored == ens.points.size());
    }
    SECTION("intermittent expansion time has a decaying tail") {
        auto lsv = make_map("intermittent", {{"gamma", 0.5}});
        auto lens = simulate_ensemble(lsv, 20000, 500, 23);
        auto rep = lyapunov_check(lsv, lens, 300);
        auto ht = expansion_time(lsv, lens, rep.estimate, 256);
        CHECK(ht.tail.values[0] > 0.0);
        for (std::size_t i = 1; i < ht.tail.values.size(); ++i)
            REQUIRE(ht.tail.values[i] <= ht.tail.values[i - 1] + 1e-12); // non-increasing
        std::vector<double> ns, vs;
        for (std::size_t i = 0; i < ht.tail.ns.size(); ++i)
            if (ht.tail.ns[i] >= 4 && ht.tail.values[i] > 0) {
                ns.push_back(ht.tail.ns[i]);
                vs.push_back(ht.tail.values[i]);
            }
        CHECK(loglog_fit(ns, vs).slope < 0.0);
    }
}
