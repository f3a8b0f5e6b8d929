#ifndef ERGOLAB_CORRELATION_HPP
#define ERGOLAB_CORRELATION_HPP

#include <cmath>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "ergolab/common.hpp"
#include "ergolab/ensemble.hpp"
#include "ergolab/fit.hpp"
#include "ergolab/grid.hpp"
#include "ergolab/maps.hpp"
#include "ergolab/observable.hpp"
#include "ergolab/parallel.hpp"
#include "ergolab/transfer.hpp"

namespace ergolab {

struct DecaySeries {
    std::vector<double> ns;
    std::vector<double> values; // normalized (correlations) or probabilities (LD)
    std::vector<double> raw;    // un-normalized covariances where applicable
    std::vector<double> se;     // Monte-Carlo standard errors (0 when deterministic)
};

enum class RateFamily { polynomial, stretched, exponential };

inline const char* rate_family_name(RateFamily f) {
    switch (f) {
        case RateFamily::polynomial: return "polynomial";
        case RateFamily::stretched: return "stretched";
        case RateFamily::exponential: return "exponential";
    }
    return "?";
}

struct RateFit {
    RateFamily family = RateFamily::polynomial;
    double beta = std::numeric_limits<double>::quiet_NaN();
    double tau = std::numeric_limits<double>::quiet_NaN();
    double theta = std::numeric_limits<double>::quiet_NaN();
    double log_prefactor = 0;
    double r2 = 0;
    double residual_max = 0;
};

namespace detail {

struct ThetaFit {
    double theta = 0, tau = 0, c = 0, r2 = -kInfDist, residual_max = 0;
};

inline ThetaFit fit_at_theta(const std::vector<double>& ns, const std::vector<double>& logv,
                             double theta) {
    std::vector<double> x(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) x[i] = std::pow(ns[i], theta);
    LinearFit lf = linear_fit(x, logv);
    return {theta, -lf.slope, lf.intercept, lf.r2, lf.residual_max};
}

} // namespace detail

// Least squares on the linearizing transform of each family.  The stretched
// exponent is profiled over a fixed grid and then refined by a deterministic
// ternary search within one grid step (the joint fit is ill-conditioned).
inline RateFit fit_rate(const DecaySeries& series, const std::string& family = "auto") {
    std::vector<double> ns, vs;
    for (std::size_t i = 0; i < series.ns.size(); ++i) {
        if (series.values[i] > 0) {
            ns.push_back(series.ns[i]);
            vs.push_back(series.values[i]);
        }
    }
    if (ns.size() < 6) throw precondition_error("insufficient-points: need >= 6 positive values");
    std::vector<double> logv(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) logv[i] = std::log(vs[i]);

    auto fit_poly = [&] {
        std::vector<double> ln(ns.size());
        for (std::size_t i = 0; i < ns.size(); ++i) ln[i] = std::log(ns[i]);
        LinearFit lf = linear_fit(ln, logv);
        RateFit r;
        r.family = RateFamily::polynomial;
        r.beta = -lf.slope;
        r.log_prefactor = lf.intercept;
        r.r2 = lf.r2;
        r.residual_max = lf.residual_max;
        return r;
    };
    auto fit_exp = [&] {
        LinearFit lf = linear_fit(ns, logv);
        RateFit r;
        r.family = RateFamily::exponential;
        r.tau = -lf.slope;
        r.log_prefactor = lf.intercept;
        r.r2 = lf.r2;
        r.residual_max = lf.residual_max;
        return r;
    };
    auto fit_stretched = [&] {
        detail::ThetaFit best;
        for (int k = 0; k <= 18; ++k) {
            double theta = 0.1 + 0.05 * k;
            auto f = detail::fit_at_theta(ns, logv, theta);
            if (f.r2 > best.r2) best = f;
        }
        double lo = std::max(0.01, best.theta - 0.05), hi = std::min(1.0, best.theta + 0.05);
        for (int it = 0; it < 60; ++it) {
            double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
            if (detail::fit_at_theta(ns, logv, m1).r2 < detail::fit_at_theta(ns, logv, m2).r2)
                lo = m1;
            else
                hi = m2;
        }
        auto f = detail::fit_at_theta(ns, logv, 0.5 * (lo + hi));
        RateFit r;
        r.family = RateFamily::stretched;
        r.tau = f.tau;
        r.theta = f.theta;
        r.log_prefactor = f.c;
        r.r2 = f.r2;
        r.residual_max = f.residual_max;
        return r;
    };

    auto rate_of = [](const RateFit& r) {
        return r.family == RateFamily::polynomial ? r.beta : r.tau;
    };

    if (family == "polynomial") {
        auto r = fit_poly();
        if (!(rate_of(r) > 0)) throw numeric_error("fit-failure: nonpositive polynomial rate");
        return r;
    }
    if (family == "exponential") {
        auto r = fit_exp();
        if (!(rate_of(r) > 0)) throw numeric_error("fit-failure: nonpositive exponential rate");
        return r;
    }
    if (family == "stretched") {
        auto r = fit_stretched();
        if (!(rate_of(r) > 0)) throw numeric_error("fit-failure: nonpositive stretched rate");
        return r;
    }
    if (family != "auto") throw precondition_error("fit_rate: unknown family '" + family + "'");
    RateFit best;
    best.r2 = -kInfDist;
    for (auto& cand : {fit_poly(), fit_exp(), fit_stretched()})
        if (rate_of(cand) > 0 && cand.r2 > best.r2) best = cand;
    if (best.r2 == -kInfDist) throw numeric_error("fit-failure: no family fits with a positive rate");
    return best;
}

// --- correlation series -----------------------------------------------------

struct UlamMethod {
    int N = 4096;
};
struct EnsembleMethod {
    std::size_t count = 100000;
    int burn_in = 1000;
    std::uint64_t seed = 1;
};
using CorrelationMethod = std::variant<UlamMethod, EnsembleMethod>;

enum class TestNorm { sup, l1 }; // B2 normalization convention

namespace detail {

inline double require_norm(Observable& phi, std::uint64_t seed) {
    if (!phi.norms_known()) holder_norm(phi, phi.alpha, 4000, seed);
    double n = phi.holder_norm();
    if (n == 0) throw precondition_error("zero-norm: observable has vanishing norm");
    return n;
}

} // namespace detail

// Cor(phi, psi o f^n) for n = 1..n_max.  The Ulam method evaluates the pairing
// int phi (psi o f^n) dmu through its dual int (P_mu^n phi) psi dmu (property
// (P2)); iterating the Koopman grid operator instead would amplify the bin
// assignment error by the expansion factor each step.
inline DecaySeries correlation_series(const PiecewiseMap& map, Observable phi, Observable psi,
                                      int n_max, const CorrelationMethod& method,
                                      TestNorm b2 = TestNorm::sup) {
    DecaySeries out;
    double norm_phi = detail::require_norm(phi, 101);

    if (std::holds_alternative<UlamMethod>(method)) {
        if (map.dim != 1)
            throw precondition_error("unsupported-dimension: Ulam correlation is 1-D only");
        int N = std::get<UlamMethod>(method).N;
        UlamOperator op = with_invariant_density(ulam(map, N));
        GridFunction phig = sample_on_grid(op.grid, [&](double x) { return phi(point1(x)); });
        GridFunction psig = sample_on_grid(op.grid, [&](double x) { return psi(point1(x)); });
        double mean_phi = grid_integral_mu(op, phig);
        GridFunction g(op.grid);
        for (std::size_t i = 0; i < g.v.size(); ++i) g.v[i] = phig.v[i] - mean_phi;

        double norm_psi;
        if (b2 == TestNorm::sup)
            norm_psi = psi.norms_known() ? psi.sup_norm : psig.sup_norm();
        else
            norm_psi = grid_norm_mu(op, psig, 1.0);
        if (norm_psi == 0) throw precondition_error("zero-norm: test observable has vanishing norm");

        for (int n = 1; n <= n_max; ++n) {
            g = apply_P(op, g);
            GridFunction prod(op.grid);
            for (std::size_t i = 0; i < prod.v.size(); ++i) prod.v[i] = g.v[i] * psig.v[i];
            double cov = std::fabs(grid_integral_mu(op, prod));
            out.ns.push_back(double(n));
            out.raw.push_back(cov);
            out.values.push_back(cov / (norm_phi * norm_psi));
            out.se.push_back(0.0);
        }
        return out;
    }

    const auto& em = std::get<EnsembleMethod>(method);
    OrbitEnsemble ens = simulate_ensemble(map, em.count, em.burn_in, em.seed);
    const std::size_t M = ens.points.size();
    const int batches = 32;
    std::vector<double> phi0(M), mean_orbit_psi(std::size_t(n_max) + 1, 0.0);
    // per-batch accumulators of phi(x) psi(f^n x)
    std::vector<std::vector<double>> acc(std::size_t(batches), std::vector<double>(std::size_t(n_max) + 1, 0.0));
    std::vector<std::vector<double>> psiacc(std::size_t(batches), std::vector<double>(std::size_t(n_max) + 1, 0.0));

    std::vector<std::vector<double>> local{std::size_t(M)};
    parallel_for(M, [&](std::size_t i) {
        Rng rng(derive_stream(ens.seed ^ label_stream("corr"), i));
        Point x = ens.points[i];
        std::vector<double> row(2 * std::size_t(n_max + 1));
        double p0 = phi(x);
        phi0[i] = p0;
        for (int n = 0; n <= n_max; ++n) {
            double ps = psi(x);
            row[std::size_t(n)] = p0 * ps;
            row[std::size_t(n_max + 1 + n)] = ps;
            if (n < n_max) x = map.step_typical(x, rng);
        }
        local[i] = std::move(row);
    });
    for (std::size_t i = 0; i < M; ++i) {
        int b = int(i * std::size_t(batches) / M);
        for (int n = 0; n <= n_max; ++n) {
            acc[std::size_t(b)][std::size_t(n)] += local[i][std::size_t(n)];
            psiacc[std::size_t(b)][std::size_t(n)] += local[i][std::size_t(n_max + 1 + n)];
        }
    }
    double mean_phi = mean(phi0);
    double norm_psi;
    if (b2 == TestNorm::sup) {
        norm_psi = psi.norms_known() ? psi.sup_norm : 0.0;
        if (norm_psi == 0)
            for (std::size_t i = 0; i < M; ++i) norm_psi = std::max(norm_psi, std::fabs(phi0[i]));
    } else {
        norm_psi = 0.0;
        for (const auto& p : ens.points) norm_psi += std::fabs(psi(p));
        norm_psi /= double(M);
    }
    if (norm_psi == 0) throw precondition_error("zero-norm: test observable has vanishing norm");

    for (int n = 1; n <= n_max; ++n) {
        std::vector<double> bvals(std::size_t(batches), 0.0);
        double total = 0, psitotal = 0;
        for (int b = 0; b < batches; ++b) {
            std::size_t lo = M * std::size_t(b) / batches, hi = M * std::size_t(b + 1) / batches;
            double cnt = double(hi - lo);
            total += acc[std::size_t(b)][std::size_t(n)];
            psitotal += psiacc[std::size_t(b)][std::size_t(n)];
            bvals[std::size_t(b)] =
                acc[std::size_t(b)][std::size_t(n)] / cnt - mean_phi * psiacc[std::size_t(b)][std::size_t(n)] / cnt;
        }
        double cov = total / double(M) - mean_phi * (psitotal / double(M));
        out.ns.push_back(double(n));
        out.raw.push_back(std::fabs(cov));
        out.values.push_back(std::fabs(cov) / (norm_phi * norm_psi));
        out.se.push_back(sample_sd(bvals) / std::sqrt(double(batches)) / (norm_phi * norm_psi));
    }
    return out;
}

// --- large deviations ---------------------------------------------------------

// mu(|S_n/n - mean| > eps) along measure-typical orbits started from the
// ensemble; phi is centered at its ensemble mean.
inline DecaySeries ld_series(const PiecewiseMap& map, const Observable& phi, double eps,
                             const std::vector<int>& n_grid, const OrbitEnsemble& ens) {
    if (!(eps > 0)) throw precondition_error("ld_series: eps must be positive");
    if (n_grid.empty()) throw precondition_error("ld_series: empty n grid");
    int n_max = 0;
    for (std::size_t k = 0; k < n_grid.size(); ++k) {
        if (n_grid[k] < 1) throw precondition_error("ld_series: n values must be >= 1");
        if (k > 0 && n_grid[k] <= n_grid[k - 1])
            throw precondition_error("ld_series: n grid must be strictly increasing");
        n_max = std::max(n_max, n_grid[k]);
    }
    const std::size_t M = ens.points.size();
    std::vector<double> phibar(M);
    parallel_for(M, [&](std::size_t i) { phibar[i] = phi(ens.points[i]); });
    double mean_phi = mean(phibar);

    std::vector<std::vector<std::uint8_t>> exceed(M);
    parallel_for(M, [&](std::size_t i) {
        Rng rng(derive_stream(ens.seed ^ label_stream("ldev"), i));
        Point x = ens.points[i];
        double s = 0;
        std::vector<std::uint8_t> row(n_grid.size(), 0);
        int ptr = 0;
        for (int n = 1; n <= n_max; ++n) {
            s += phi(x) - mean_phi;
            while (ptr < int(n_grid.size()) && n_grid[std::size_t(ptr)] == n) {
                row[std::size_t(ptr)] = std::fabs(s / n) > eps ? 1 : 0;
                ++ptr;
            }
            if (n < n_max) x = map.step_typical(x, rng);
        }
        exceed[i] = std::move(row);
    });

    DecaySeries out;
    for (std::size_t k = 0; k < n_grid.size(); ++k) {
        double cnt = 0;
        for (std::size_t i = 0; i < M; ++i) cnt += exceed[i][k];
        double p = cnt / double(M);
        out.ns.push_back(double(n_grid[k]));
        out.values.push_back(p);
        out.raw.push_back(cnt);
        out.se.push_back(std::sqrt(std::max(p * (1.0 - p), 0.0) / double(M)));
    }
    return out;
}

// --- hitting / stabilization times ---------------------------------------------

struct BandRule {
    enum Kind { abs_dev, upper } kind = abs_dev;
    double center = 0; // mean (abs_dev) or threshold (upper)
    double eps = 0;

    bool violates(double a) const {
        return kind == abs_dev ? std::fabs(a - center) > eps : a > center;
    }
};

struct HittingTail {
    DecaySeries tail;          // m(N > n) estimates for n = 1..N_max
    std::size_t censored = 0;  // still violating at N_max
    std::size_t count = 0;
};

// N(x) = 1 + last n <= N_max at which the running Birkhoff average violates
// the band; right-censored points keep contributing to every tail value
// (dropping them would bias the tail downward).
inline HittingTail hitting_times(const PiecewiseMap& map, const Observable& phi, const BandRule& rule,
                                 const OrbitEnsemble& ens, int N_max) {
    if (N_max < 1) throw precondition_error("hitting_times: N_max must be >= 1");
    const std::size_t M = ens.points.size();
    std::vector<int> Npt(M, 1);
    std::vector<std::uint8_t> cens(M, 0);
    parallel_for(M, [&](std::size_t i) {
        Rng rng(derive_stream(ens.seed ^ label_stream("hitting"), i));
        Point x = ens.points[i];
        double s = 0;
        int last_violation = 0;
        for (int n = 1; n <= N_max; ++n) {
            s += phi(x);
            if (rule.violates(s / n)) {
                last_violation = n;
                if (n == N_max) cens[i] = 1;
            }
            if (n < N_max) x = map.step_typical(x, rng);
        }
        Npt[i] = last_violation + 1;
    });

    HittingTail out;
    out.count = M;
    for (auto c : cens) out.censored += c;
    std::vector<std::size_t> hist(std::size_t(N_max) + 2, 0);
    for (std::size_t i = 0; i < M; ++i) {
        int v = cens[i] ? N_max + 1 : Npt[i];
        ++hist[std::size_t(v)];
    }
    // tail(n) = #{N > n} / M by suffix sums
    std::vector<double> suffix(std::size_t(N_max) + 3, 0.0);
    for (int v = N_max + 1; v >= 0; --v)
        suffix[std::size_t(v)] = suffix[std::size_t(v) + 1] + double(hist[std::size_t(v)]);
    for (int n = 1; n <= N_max; ++n) {
        double cnt = suffix[std::size_t(n) + 1];
        double p = cnt / double(M);
        out.tail.ns.push_back(double(n));
        out.tail.values.push_back(p);
        out.tail.raw.push_back(cnt);
        out.tail.se.push_back(std::sqrt(std::max(p * (1.0 - p), 0.0) / double(M)));
    }
    return out;
}

// specialization: expansion time E(x) for phi_1 = log||Df^{-1}|| against lambda/2
inline HittingTail expansion_time(const PiecewiseMap& map, const OrbitEnsemble& ens, double lambda,
                                  int N_max) {
    if (!(lambda < 0)) throw precondition_error("expansion_time: lambda estimate must be negative");
    Observable phi1 = make_observable("log_deriv_inv",
                                      [m = map](const Point& p) { return log_deriv_inv(m, p); }, 1.0,
                                      map.domain);
    BandRule rule;
    rule.kind = BandRule::upper;
    rule.center = lambda / 2.0;
    return hitting_times(map, phi1, rule, ens, N_max);
}

} // namespace ergolab

#endif
