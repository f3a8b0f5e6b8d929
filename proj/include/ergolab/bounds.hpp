#ifndef ERGOLAB_BOUNDS_HPP
#define ERGOLAB_BOUNDS_HPP

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "ergolab/common.hpp"
#include "ergolab/correlation.hpp"
#include "ergolab/ensemble.hpp"
#include "ergolab/fit.hpp"
#include "ergolab/maps.hpp"
#include "ergolab/observable.hpp"

namespace ergolab {

// Everything the three large-deviation bounds and the truncation schedules
// consume.  The asymptotic prefactors are existential constants; they appear
// here as explicit calibration knobs with default 1.
struct BoundParams {
    RateFamily regime = RateFamily::polynomial;
    double C = 1.0;        // correlation prefactor
    double beta = 2.0;     // polynomial correlation exponent
    double tau = 1.0;      // (stretched) exponential correlation rate
    double theta = 1.0;    // stretch exponent
    double q = 3.0;        // moment order, q > max{1, beta} in polynomial mode
    double eps = 0.1;      // deviation size
    double norm_B = 1.0;   // ||phi||_B
    double norm_inf = 1.0; // ||phi||_inf
    double chi_inf = 1.0;  // ||chi||_inf = ||sum P^n phi||_inf (exponential mode)
    double C_prime = 1.0;  // calibration constant
    double zeta = 1.0;     // tail exponent of mu(A_{i,k}) <~ e^{-zeta k}
    double gamma_slack = 0.1;
    double delta = 0.1;    // phi_2 cutoff
    double c_density = 1.0; // density lower bound for the tail conversion

    void validate() const {
        if (!(eps > 0)) throw precondition_error("BoundParams: eps must be positive");
        if (!(C > 0) || !(C_prime > 0)) throw precondition_error("BoundParams: constants must be positive");
        switch (regime) {
            case RateFamily::polynomial:
                if (!(beta > 0)) throw precondition_error("BoundParams: beta must be positive");
                if (!(q > std::max(1.0, beta)))
                    throw precondition_error("BoundParams: polynomial mode needs q > max{1, beta}");
                break;
            case RateFamily::stretched:
                if (!(tau > 0) || !(theta > 0))
                    throw precondition_error("BoundParams: stretched mode needs tau, theta > 0");
                break;
            case RateFamily::exponential:
                if (!(norm_inf > 0) || !(chi_inf >= 0))
                    throw precondition_error("BoundParams: exponential mode needs norms");
                break;
        }
    }
};

inline double theta_prime(double theta) { return theta / (theta + 2.0); }

// tau' = min{tau, eps^2 / (162 ||phi||_inf^2)} from the stretched proposition
inline double tau_prime(double tau, double eps, double norm_inf) {
    return std::min(tau, eps * eps / (162.0 * norm_inf * norm_inf));
}

// Azuma rate of the exponential proposition's proof:
// eps^2 / (8 (||phi||_inf + 2 ||chi||_inf)^2).  (The displayed rate in the
// statement omits eps^2; the proof version is implemented.)
inline double exponential_rate(double eps, double norm_inf, double chi_inf) {
    double denom = norm_inf + 2.0 * chi_inf;
    return eps * eps / (8.0 * denom * denom);
}

struct LdBound {
    double value = 0;
    double theta_prime = std::numeric_limits<double>::quiet_NaN();
    double tau_prime = std::numeric_limits<double>::quiet_NaN();
};

inline LdBound ld_bound(const BoundParams& p, double n) {
    p.validate();
    if (!(n >= 1)) throw precondition_error("ld_bound: n must be >= 1");
    LdBound out;
    switch (p.regime) {
        case RateFamily::polynomial:
            // C' ||phi||_B ||phi||_inf^{2q-1} eps^{-2q} n^{-beta}
            out.value = p.C_prime * p.norm_B * std::pow(p.norm_inf, 2.0 * p.q - 1.0) *
                        std::pow(p.eps, -2.0 * p.q) * std::pow(n, -p.beta);
            break;
        case RateFamily::stretched: {
            out.theta_prime = theta_prime(p.theta);
            out.tau_prime = tau_prime(p.tau, p.eps, p.norm_inf);
            double prefactor = 2.0 + p.C * p.norm_B / p.eps;
            out.value = p.C_prime * prefactor * std::exp(-out.tau_prime * std::pow(n, out.theta_prime));
            break;
        }
        case RateFamily::exponential: {
            double tau = exponential_rate(p.eps, p.norm_inf, p.chi_inf);
            out.tau_prime = tau;
            out.value = p.C_prime * std::exp(-tau * n);
            break;
        }
    }
    return out;
}

// --- tail conversion: deviation rates into return-time tails ------------------

struct RateLaw {
    RateFamily family = RateFamily::polynomial;
    double beta = 3.0;  // xi(l) = l^{-beta}
    double tau = 1.0;   // xi(l) = exp(-tau l^theta)
    double theta = 1.0;
    double scale = 1.0; // multiplicative prefactor on xi

    double operator()(double l) const {
        switch (family) {
            case RateFamily::polynomial: return scale * std::pow(l, -beta);
            case RateFamily::stretched: return scale * std::exp(-tau * std::pow(l, theta));
            case RateFamily::exponential: return scale * std::exp(-tau * l);
        }
        return 0;
    }
};

// (1/c) sum_{l>=n} xi(l) to relative accuracy 1e-6: geometric closed form for
// the exponential family, direct summation with an Euler-Maclaurin corrected
// cutoff otherwise.
inline double tail_from_ld(const RateLaw& xi, double c, double n) {
    if (!(c > 0)) throw precondition_error("tail_from_ld: c must be positive");
    if (!(n >= 1)) throw precondition_error("tail_from_ld: n must be >= 1");
    if (xi.family == RateFamily::polynomial && xi.beta <= 1.0)
        throw precondition_error("divergent-sum: polynomial tail needs beta > 1");
    if (xi.family == RateFamily::exponential) {
        if (!(xi.tau > 0)) throw precondition_error("tail_from_ld: tau must be positive");
        double r = std::exp(-xi.tau);
        return xi.scale * std::exp(-xi.tau * n) / (1.0 - r) / c;
    }
    if (xi.family == RateFamily::stretched && (!(xi.tau > 0) || !(xi.theta > 0)))
        throw precondition_error("tail_from_ld: stretched law needs tau, theta > 0");

    double sum = 0;
    double l = n;
    if (xi.family == RateFamily::polynomial) {
        // direct terms, then EM remainder: int_N^inf + f(N)/2 - f'(N)/12
        double cutoff_terms = std::max(1000.0, 100.0 * n);
        double N = n + cutoff_terms;
        for (; l < N; l += 1.0) sum += xi(l);
        double b = xi.beta;
        double tail = xi.scale * (std::pow(N, 1.0 - b) / (b - 1.0) + 0.5 * std::pow(N, -b) +
                                  b * std::pow(N, -b - 1.0) / 12.0);
        sum += tail;
    } else {
        double prev;
        do {
            prev = xi(l);
            sum += prev;
            l += 1.0;
            if (l > n + 1e8) throw numeric_error("tail_from_ld: summation budget exceeded");
        } while (prev > 1e-9 * sum || prev > 1e-300);
    }
    return sum / c;
}

// --- special observables -----------------------------------------------------

// phi_1 = log ||Df^{-1}||; phi_2^(delta) is -log d(x,C) inside the delta
// neighbourhood, the linear ramp (log delta / delta)(d - 2 delta) on
// [delta, 2 delta), and 0 beyond (continuous at both joints).
inline std::pair<Observable, Observable> special_observables(const PiecewiseMap& map, double delta) {
    if (!(delta > 0.0 && delta < 0.25))
        throw precondition_error("special_observables: delta must be in (0, 0.25)");
    if (!map.has_critical())
        throw precondition_error("special_observables: phi_2 needs a nonempty critical set");
    auto shared = std::make_shared<const PiecewiseMap>(map);
    Observable phi1 = make_observable(
        "phi1_log_deriv_inv", [shared](const Point& p) { return log_deriv_inv(*shared, p); }, 1.0,
        map.domain);
    Observable phi2 = make_observable(
        "phi2_recurrence",
        [shared, delta](const Point& p) {
            double d = shared->dist_to_critical(p);
            if (d < delta) return -std::log(d);
            if (d < 2.0 * delta) return (std::log(delta) / delta) * (d - 2.0 * delta);
            return 0.0;
        },
        1.0, map.domain);
    return {phi1, phi2};
}

// phi_1 for maps with empty critical set as well
inline Observable expansion_observable(const PiecewiseMap& map) {
    auto shared = std::make_shared<const PiecewiseMap>(map);
    return make_observable("phi1_log_deriv_inv",
                           [shared](const Point& p) { return log_deriv_inv(*shared, p); }, 1.0,
                           map.domain);
}

struct TruncatedObservable {
    Observable phi_k;
    double holder_budget = 0; // alpha^{-1} k e^{alpha k}, unit calibration
};

// cap at k; the Hölder norm of the capped observable obeys <~ alpha^{-1} k e^{alpha k}
inline TruncatedObservable truncate(const Observable& phi, double k, double calibration = 1.0) {
    if (!(k > 0)) throw precondition_error("truncate: k must be positive");
    double alpha = phi.alpha;
    TruncatedObservable out;
    out.phi_k = phi;
    out.phi_k.name = phi.name + "_capped";
    auto base = phi.eval;
    out.phi_k.eval = [base, k](const Point& p) { return std::min(base(p), k); };
    if (phi.norms_known()) {
        out.phi_k.sup_norm = std::min(phi.sup_norm, k);
        out.phi_k.sup_prov = Provenance::estimated;
    }
    out.holder_budget = calibration * (1.0 / alpha) * k * std::exp(alpha * k);
    return out;
}

// --- truncation schedules ------------------------------------------------------

struct Schedule {
    double k = 0;
    double alpha = std::numeric_limits<double>::quiet_NaN(); // polynomial mode only
};

// regime "strexp": k(n) = n^{1/(theta+2)}        (Azuma block size, stretched proof)
// regime "polynomial": k = ((beta+1-gamma)/zeta) log n, alpha = gamma zeta / (2(beta+1-gamma))
// regime "stretched": k = n^{theta'/3 - gamma}   (non-Hölder truncation proof)
inline Schedule schedule_k(const std::string& regime, const BoundParams& p, double n) {
    if (!(n >= 1)) throw precondition_error("schedule_k: n must be >= 1");
    Schedule s;
    if (regime == "strexp") {
        if (!(p.theta > 0)) throw precondition_error("schedule_k: theta must be positive");
        s.k = std::pow(n, 1.0 / (p.theta + 2.0));
        return s;
    }
    if (regime == "polynomial") {
        if (!(p.zeta > 0) || !(p.beta > 0) || !(p.gamma_slack > 0) || !(p.beta + 1.0 - p.gamma_slack > 0))
            throw precondition_error("schedule_k: polynomial schedule needs beta, zeta, gamma > 0");
        s.k = (p.beta + 1.0 - p.gamma_slack) / p.zeta * std::log(n);
        s.alpha = p.gamma_slack * p.zeta / (2.0 * (p.beta + 1.0 - p.gamma_slack));
        return s;
    }
    if (regime == "stretched") {
        double tp = theta_prime(p.theta);
        double expo = tp / 3.0 - p.gamma_slack;
        if (!(expo > 0))
            throw precondition_error("schedule-infeasible: gamma slack must be below theta'/3");
        s.k = std::pow(n, expo);
        return s;
    }
    throw precondition_error("schedule_k: regime must be strexp, polynomial, or stretched");
}

// --- A_{i,k} measures ------------------------------------------------------------

struct AikReport {
    std::vector<double> k_grid;
    std::vector<double> fractions; // ensemble estimate of mu(phi_i >= k)
    double zeta_hat = std::numeric_limits<double>::quiet_NaN();
    bool all_zero_tail = false;
    std::vector<double> delta_grid;
    std::vector<double> phi2_means; // int phi_2^(delta) dmu per delta
};

// mu(A_{i,k}) = mu{phi_i >= k} per k with a log-linear fit of the decay rate
// zeta, plus the delta-sweep of int phi_2^(delta) dmu (should shrink with delta).
inline AikReport aik_measure(const PiecewiseMap& map, const OrbitEnsemble& ens, const Observable& phi,
                             const std::vector<double>& k_grid,
                             const std::vector<double>& delta_grid = {0.2, 0.1, 0.05, 0.025, 0.0125}) {
    if (k_grid.empty()) throw precondition_error("aik_measure: empty k grid");
    AikReport rep;
    rep.k_grid = k_grid;
    const std::size_t M = ens.points.size();
    std::vector<double> vals(M);
    parallel_for(M, [&](std::size_t i) { vals[i] = phi(ens.points[i]); });

    std::vector<double> lk, lf;
    for (double k : k_grid) {
        double cnt = 0;
        for (double v : vals) cnt += (v >= k);
        rep.fractions.push_back(cnt / double(M));
        if (cnt > 0) {
            lk.push_back(k);
            lf.push_back(std::log(cnt / double(M)));
        }
    }
    if (lk.size() < 2) {
        rep.all_zero_tail = true; // warning state: k grid beyond the observed range
    } else {
        LinearFit lfit = linear_fit(lk, lf);
        rep.zeta_hat = -lfit.slope;
    }

    if (map.has_critical()) {
        for (double d : delta_grid) {
            auto [p1, p2] = special_observables(map, d);
            (void)p1;
            double s = 0;
            for (const auto& p : ens.points) s += p2(p);
            rep.delta_grid.push_back(d);
            rep.phi2_means.push_back(s / double(M));
        }
    }
    return rep;
}

// recurrence time R_{eps,delta}: first N with running averages of phi_2^(delta)
// at or below 2 eps forever after (estimated tail, right-censored at N_max)
inline HittingTail recurrence_time(const PiecewiseMap& map, const OrbitEnsemble& ens, double delta,
                                   double eps, int N_max) {
    auto [p1, p2] = special_observables(map, delta);
    (void)p1;
    BandRule rule;
    rule.kind = BandRule::upper;
    rule.center = 2.0 * eps;
    return hitting_times(map, p2, rule, ens, N_max);
}

} // namespace ergolab

#endif
