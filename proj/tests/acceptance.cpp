// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one [PASS]/[FAIL] line per criterion.  Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ergolab/ergolab.hpp"

using namespace ergolab;

namespace {

struct Criterion {
    int id;
    std::string name;
    std::function<bool(std::string&)> run;
};

bool approx(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

char buf[512];

std::string fmt(const char* f, auto... args) {
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

} // namespace

int main() {
    std::vector<Criterion> criteria;

    criteria.push_back({1, "doubling covariance oracle Cov(x, x o f^n) = 2^-n/12 (Ulam N = 4096)",
                        [](std::string& d) {
        auto dbl = make_map("doubling");
        Observable x = coordinate_observable({0, 1});
        auto series = correlation_series(dbl, x, x, 10, UlamMethod{4096});
        double worst = 0;
        for (int n = 1; n <= 10; ++n)
            worst = std::max(worst, std::fabs(series.raw[std::size_t(n - 1)] - std::pow(2.0, -n) / 12.0));
        d = fmt("max abs error %.3g (tol 1e-3)", worst);
        return worst <= 1e-3;
    }});

    criteria.push_back({2, "intermittent (gamma = 1/2) induced tail slope -2.0 +- 0.2 on [1e2, 1e4]",
                        [](std::string& d) {
        auto lsv = make_map("intermittent", {{"gamma", 0.5}});
        auto ind = first_return_partition(lsv, {0.5, 1.0}, 10000);
        auto tail = tail_series(ind);
        std::vector<double> ns, vs;
        for (std::size_t i = 0; i < tail.ns.size(); ++i)
            if (tail.ns[i] >= 100) {
                ns.push_back(tail.ns[i]);
                vs.push_back(tail.values[i]);
            }
        double slope = loglog_fit(ns, vs).slope;
        d = fmt("slope %.4f, cells %zu, residual %.2g", slope, ind.cells.size(), ind.residual);
        return approx(slope, -2.0, 0.2);
    }});

    criteria.push_back({3, "intermittent correlation slope in [-1.3, -0.7] (Ulam N = 2^14)",
                        [](std::string& d) {
        auto lsv = make_map("intermittent", {{"gamma", 0.5}});
        Observable x = coordinate_observable({0, 1});
        auto series = correlation_series(lsv, x, x, 64, UlamMethod{1 << 14});
        std::vector<double> ns, vs;
        for (std::size_t i = 0; i < series.ns.size(); ++i)
            if (series.ns[i] >= 8) {
                ns.push_back(series.ns[i]);
                vs.push_back(series.raw[i]);
            }
        double slope = loglog_fit(ns, vs).slope;
        d = fmt("slope %.4f over n in [8, 64] (theory exponent 1 - 1/gamma = -1)", slope);
        return slope >= -1.3 && slope <= -0.7;
    }});

    criteria.push_back({4, "Azuma-Hoeffding: exact binomial tail vs bound, empirical within 10%",
                        [](std::string& d) {
        auto rep = azuma_check(fair_coin_chain(), 1.0, 0.3, 100, 1000000, 7);
        // independent oracle value P(Bin(100, 1/2) >= 65), 30-digit reference
        bool ok = rep.exact_available && approx(rep.exact, 0.00175882086148508, 1e-10) &&
                  approx(rep.bound, std::exp(-4.5), 1e-15) && rep.exact <= rep.bound &&
                  std::fabs(rep.empirical - rep.exact) <= 0.1 * rep.exact;
        d = fmt("exact %.6g <= bound %.6g; empirical %.6g (dev %.1f%%)", rep.exact, rep.bound,
                rep.empirical, 100 * std::fabs(rep.empirical - rep.exact) / rep.exact);
        return ok;
    }});

    criteria.push_back({5, "Rio inequality: iid case LHS 8 / RHS 32; 100 random chains",
                        [](std::string& d) {
        auto iid = rio_check(fair_coin_chain(), 1.0, 8);
        if (!approx(iid.lhs, 8.0, 1e-9) || !approx(iid.rhs, 32.0, 1e-9) || !iid.holds) {
            d = fmt("iid case failed: lhs %.6g rhs %.6g", iid.lhs, iid.rhs);
            return false;
        }
        Rng rng(2718281828);
        int failures = 0;
        for (int t = 0; t < 100; ++t) {
            std::size_t S = 2 + rng.next_below(3); // states <= 4
            ExactChain c;
            c.P.assign(S, std::vector<double>(S));
            c.init.assign(S, 1.0 / double(S));
            c.obs.assign(S, 0.0);
            for (auto& row : c.P) {
                double s = 0;
                for (auto& v : row) s += (v = 0.05 + rng.uniform01());
                for (auto& v : row) v /= s;
            }
            for (auto& v : c.obs) v = rng.uniform(-1, 1);
            int n = 2 + int(rng.next_below(7)); // n <= 8
            for (double p : {1.0, 2.0})
                if (!rio_check(c, p, n).holds) ++failures;
        }
        d = fmt("iid lhs/rhs = 8/32; %d violations over 100 chains x {p=1,2}", failures);
        return failures == 0;
    }});

    criteria.push_back({6, "martingale property: residuals below tolerance, halving under refinement",
                        [](std::string& d) {
        auto dbl = make_map("doubling");
        double pxi[2], sn1[2];
        int idx = 0;
        for (int N : {1 << 12, 1 << 13}) {
            auto op = with_invariant_density(ulam(dbl, N));
            GridFunction phig = sample_on_grid(op.grid, [](double x) { return x - 0.5; });
            auto dec = decompose(op, dbl, phig, 10);
            pxi[idx] = verify_martingale(dec, op, dbl, 50).p_xi_sup;
            Rng rng(derive_stream(123, label_stream("acc6")));
            std::vector<Point> starts(1000);
            for (auto& s : starts) s = dbl.uniform_point(rng);
            sn1[idx] = verify_decomposition(dec, dbl, starts, 50, 123);
            ++idx;
        }
        bool tol_ok = pxi[0] <= 1e-3 && sn1[0] <= 1e-2 && pxi[1] <= 1e-3 && sn1[1] <= 1e-2;
        // halving: the slope-2 grid is exactly aligned at every N, so both
        // residuals sit at rounding level; treat sub-rounding pairs as
        // trivially halving
        auto halves = [](double a, double b) {
            if (a <= 1e-12 && b <= 1e-12) return true;
            if (a <= 0) return false;
            double r = b / a;
            return r >= 0.35 && r <= 0.65;
        };
        bool halving = halves(pxi[0], pxi[1]) && halves(sn1[0], sn1[1]);
        d = fmt("N=2^12: ||P xi||=%.2g, Sn1=%.2g; N=2^13: %.2g, %.2g (exact alignment: residuals at "
                "rounding level)", pxi[0], sn1[0], pxi[1], sn1[1]);
        return tol_ok && halving;
    }});

    criteria.push_back({7, "exponential LD containment at tau = eps^2/18 (doubling, 1e6 samples)",
                        [](std::string& d) {
        auto dbl = make_map("doubling");
        auto ens = simulate_ensemble(dbl, 1000000, 100, 2024);
        Observable phi = coordinate_observable({0, 1});
        std::vector<int> ngrid;
        for (int n = 50; n <= 500; n += 50) ngrid.push_back(n);
        auto series = ld_series(dbl, phi, 0.25, ngrid, ens);
        const double tau = 0.0625 / 18.0; // eps^2 / (8 (||phi|| + 2 ||chi||)^2), chi = x - 1/2
        double C = series.values[0] / std::exp(-tau * 50.0); // calibrated at n = 50
        bool ok = series.values[0] > 0;
        for (std::size_t i = 0; i < series.ns.size(); ++i)
            ok = ok && series.values[i] <= C * std::exp(-tau * series.ns[i]) * (1 + 1e-12);
        d = fmt("C' = %.4g calibrated at n=50; empirical(50) = %.3g, empirical(500) = %.3g", C,
                series.values.front(), series.values.back());
        return ok;
    }});

    criteria.push_back({8, "spectral pipeline: measured correlation rate matches q = 1/6 within 5%",
                        [](std::string& d) {
        // hand eigensolve oracle for the 3-branch Markov map: partition matrix
        // [[1/3,1/3,1/3],[1/2,1/2,0],[1/3,1/3,1/3]] has char. polynomial
        // lambda(lambda^2 - 7/6 lambda + 1/6), eigenvalues {1, 1/6, 0}
        const double q_oracle = 1.0 / 6.0;
        auto plm = make_map("plm3");
        double q3 = spectral_gap(ulam(plm, 3));
        if (!approx(q3, q_oracle, 1e-9)) {
            d = fmt("operator q %.12g differs from the 3x3 oracle", q3);
            return false;
        }
        Observable ind = make_observable(
            "cell_indicator", [](const Point& p) { return p[0] <= 1.0 / 3.0 ? 1.0 : 0.0; }, 1.0, {0, 1});
        ind.with_exact_norms(1.0, 0.0);
        auto series = correlation_series(plm, ind, ind, 12, UlamMethod{48});
        DecaySeries raw;
        raw.ns = series.ns;
        raw.values = series.raw;
        auto fit = fit_rate(raw, "exponential");
        double q_measured = std::exp(-fit.tau);
        d = fmt("q oracle %.6g, operator %.6g, measured decay rate -> %.6g (dev %.2f%%)", q_oracle, q3,
                q_measured, 100 * std::fabs(q_measured - q_oracle) / q_oracle);
        return std::fabs(q_measured - q_oracle) <= 0.05 * q_oracle;
    }});

    criteria.push_back({9, "tail conversion: sum_{l>=10} l^-3 against the summation oracle, slope -2",
                        [](std::string& d) {
        RateLaw xi;
        xi.family = RateFamily::polynomial;
        xi.beta = 3.0;
        double got = tail_from_ld(xi, 1.0, 10);
        // independent oracle: direct long-double summation + integral remainder
        long double s = 0;
        const long L = 10000010;
        for (long l = L - 1; l >= 10; --l) s += 1.0L / (long double)(l) / l / l;
        double oracle = double(s + 0.5L / (long double)(L) / L);
        std::vector<double> ns, vs;
        for (double n = 100; n <= 10000; n *= 1.3) {
            ns.push_back(n);
            vs.push_back(tail_from_ld(xi, 1.0, n));
        }
        double slope = loglog_fit(ns, vs).slope;
        bool ok = approx(got, oracle, 1e-5) && approx(slope, -2.0, 0.05);
        d = fmt("value %.8g (oracle %.8g), slope %.4f; NOTE: the criterion's literal constant "
                "0.00514 contradicts its own definition: sum_{l>=10} l^-3 = zeta(3,10) = 0.0055249",
                got, oracle, slope);
        return ok;
    }});

    criteria.push_back({10, "doubling Gibbs-Markov: lambda = 0.5 exact, K = 0, Kac integral 1 +- 1e-9",
                        [](std::string& d) {
        auto dbl = make_map("doubling");
        auto ind = first_return_partition(dbl, {0.0, 0.5}, 40);
        auto rep = verify_gibbs_markov(ind, 8);
        auto kac = kac_check_lebesgue(ind);
        d = fmt("lambda %.17g, K %.17g, markov resid %.2g, Kac %.12f", rep.lambda_hat, rep.K_hat,
                rep.markov_resid, kac.m_integral);
        return rep.pass_all() && rep.lambda_hat == 0.5 && rep.K_hat == 0.0 &&
               approx(kac.m_integral, 1.0, 1e-9);
    }});

    criteria.push_back({11, "bound formulas: theta'(1/2) = 0.2, tau' = 0.005, alpha schedule = 0.1",
                        [](std::string& d) {
        double tp = theta_prime(0.5);
        double tq = tau_prime(1.0, 0.9, 1.0);
        BoundParams p;
        p.beta = 2.0;
        p.gamma_slack = 0.5;
        p.zeta = 1.0;
        double al = schedule_k("polynomial", p, 100.0).alpha;
        d = fmt("theta' = %.17g, tau' = %.17g, alpha = %.17g (exact equality)", tp, tq, al);
        return tp == 0.2 && tq == 0.005 && al == 0.1;
    }});

    criteria.push_back({12, "nondegeneracy fit: quadratic testbed eta = 1 +- 0.05, d = 1 +- 0.05, 4x pass",
                        [](std::string& d) {
        auto quad = make_map("quadratic", {{"a", 2.0}});
        std::vector<double> eps_grid{0.2, 0.14, 0.1, 0.07, 0.05, 0.035, 0.02, 0.014, 0.01};
        auto rep = check_nondegeneracy(quad, 400000, eps_grid, 99);
        d = fmt("d_hat %.4f, eta_hat %.4f, pass C0..C3 = %d%d%d%d", rep.d_hat, rep.eta_hat,
                rep.pass_c0, rep.pass_c1, rep.pass_c2, rep.pass_c3);
        return approx(rep.d_hat, 1.0, 0.05) && approx(rep.eta_hat, 1.0, 0.05) && rep.pass_all();
    }});

    int failures = 0;
    double total = 0;
    for (auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool pass = false;
        try {
            pass = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        total += dt;
        std::printf("[%s] criterion %2d: %s\n           %s (%.1fs)\n", pass ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), detail.c_str(), dt);
        if (!pass) ++failures;
    }

    // Stated desk-scale limitation: the Viana stretched-exponential LD rate
    // n^{1/5} is not measurable; evaluate the bound curve and run a
    // Monte-Carlo smoke estimate with no rate assertion.
    {
        BoundParams p;
        p.regime = RateFamily::stretched;
        p.theta = 0.5;
        p.tau = 1.0;
        p.eps = 0.2;
        auto b100 = ld_bound(p, 100);
        auto viana = make_map("viana", {{"a0", 1.7968}, {"alpha", 0.01}, {"d", 16}});
        auto ens = simulate_ensemble(viana, 20000, 500, 3);
        Observable fiber = make_observable("fiber", [](const Point& q) { return q[1]; }, 1.0, viana.fiber);
        auto ld = ld_series(viana, fiber, 0.2, {10, 50, 100}, ens);
        std::printf("[NOTE] Viana smoke: bound(n=100) = %.4g with theta' = %.4g; Monte-Carlo "
                    "LD(10, 50, 100) = %.3g, %.3g, %.3g (no rate assertion at desk scale)\n",
                    b100.value, b100.theta_prime, ld.values[0], ld.values[1], ld.values[2]);
    }

    std::printf("%d/%zu criteria passed (%.1fs total)\n", int(criteria.size()) - failures,
                criteria.size(), total);
    return failures == 0 ? 0 : 1;
}
