#ifndef ERGOLAB_MARTINGALE_HPP
#define ERGOLAB_MARTINGALE_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "ergolab/common.hpp"
#include "ergolab/grid.hpp"
#include "ergolab/maps.hpp"
#include "ergolab/observable.hpp"
#include "ergolab/parallel.hpp"
#include "ergolab/rng.hpp"
#include "ergolab/transfer.hpp"

namespace ergolab {

// chi^(k) = sum_{j=1}^k P^j phi and xi^(k) = phi + chi^(k) - chi^(k) o f - P^k phi.
// The identity is definitional on the grid; P xi^(k) = 0 holds up to
// discretization error and is what verify_martingale measures.
struct MartingaleDecomposition {
    int k = 0;
    bool exponential_mode = false;
    GridFunction phi;      // centered
    GridFunction chi;      // chi^(k), or chi = sum_{j>=1} P^j phi in exponential mode
    GridFunction chi_of_f; // chi o f on the grid
    GridFunction pk_phi;   // P^k phi (zero function in exponential mode)
    GridFunction xi;
    bool summable = true;   // exponential mode: increments fell below threshold
    int terms_used = 0;     // exponential mode: number of P^j terms summed
    double chi_sup = 0;
};

inline MartingaleDecomposition decompose(const UlamOperator& op, const PiecewiseMap& map,
                                         const GridFunction& phi_raw, int k,
                                         bool exponential_mode = false) {
    require_same_grid(op.grid, phi_raw.grid);
    if (!op.mu_mode) throw precondition_error("decompose: operator must be mu-mode");
    if (!exponential_mode && k < 1) throw precondition_error("decompose: k must be >= 1");

    MartingaleDecomposition dec;
    dec.k = k;
    dec.exponential_mode = exponential_mode;

    // auto-center under the discrete invariant measure (the decomposition
    // assumes int phi dmu = 0)
    double m = grid_integral_mu(op, phi_raw);
    dec.phi = phi_raw;
    for (auto& x : dec.phi.v) x -= m;

    GridFunction chi(op.grid), pj = dec.phi;
    if (!exponential_mode) {
        for (int j = 1; j <= k; ++j) {
            pj = apply_P(op, pj);
            for (std::size_t i = 0; i < chi.v.size(); ++i) chi.v[i] += pj.v[i];
        }
        dec.pk_phi = pj;
    } else {
        const double tol = 1e-12;
        const int cap = 1000;
        int j = 0;
        double sup_partial = 0;
        while (j < cap) {
            pj = apply_P(op, pj);
            ++j;
            double inc = pj.sup_norm();
            for (std::size_t i = 0; i < chi.v.size(); ++i) chi.v[i] += pj.v[i];
            sup_partial = chi.sup_norm();
            if (sup_partial > 1e6) { // diverging partial sums
                dec.summable = false;
                break;
            }
            if (inc < tol) break;
        }
        dec.terms_used = j;
        if (j >= cap && pj.sup_norm() >= tol) dec.summable = false;
        dec.pk_phi = GridFunction(op.grid); // k = infinity: P^k phi term absent
        dec.k = j;
    }
    dec.chi = chi;
    dec.chi_sup = chi.sup_norm();
    dec.chi_of_f = apply_U(map, chi);
    dec.xi = GridFunction(op.grid);
    for (std::size_t i = 0; i < dec.xi.v.size(); ++i)
        dec.xi.v[i] = dec.phi.v[i] + dec.chi.v[i] - dec.chi_of_f.v[i] - dec.pk_phi.v[i];
    return dec;
}

// Pointwise check of S_n = sum Z_j + chi o f^n - chi + sum P^k phi o f^{n-j}
// along sampled orbits, all terms read from the grid.  Returns the max
// absolute residual.
inline double verify_decomposition(const MartingaleDecomposition& dec, const PiecewiseMap& map,
                                   const std::vector<Point>& starts, int n,
                                   std::uint64_t seed = 7) {
    if (n < 1) throw precondition_error("verify_decomposition: n must be >= 1");
    std::vector<double> residuals(starts.size(), 0.0);
    parallel_for(starts.size(), [&](std::size_t s) {
        Rng rng(derive_stream(seed ^ label_stream("sn1"), s));
        std::vector<Point> orbit(std::size_t(n) + 1);
        orbit[0] = starts[s];
        for (int i = 0; i < n; ++i) orbit[std::size_t(i) + 1] = map.step_typical(orbit[std::size_t(i)], rng);

        auto at = [](const GridFunction& g, const Point& p) { return g(p[0]); };
        double lhs = 0;
        for (int i = 0; i < n; ++i) lhs += at(dec.phi, orbit[std::size_t(i)]);
        double rhs = at(dec.chi, orbit[std::size_t(n)]) - at(dec.chi, orbit[0]);
        for (int j = 1; j <= n; ++j) {
            rhs += at(dec.xi, orbit[std::size_t(n - j)]);
            rhs += at(dec.pk_phi, orbit[std::size_t(n - j)]);
        }
        residuals[s] = std::fabs(lhs - rhs);
    });
    double mx = 0;
    for (double r : residuals) mx = std::max(mx, r);
    return mx;
}

struct MartingaleReport {
    double p_xi_sup = 0;       // ||P xi||_inf
    double cond_exp_resid = 0; // max_j ||U^{j+1} P xi||_inf
};

inline MartingaleReport verify_martingale(const MartingaleDecomposition& dec, const UlamOperator& op,
                                          const PiecewiseMap& map, int n) {
    MartingaleReport rep;
    GridFunction g = apply_P(op, dec.xi);
    rep.p_xi_sup = g.sup_norm();
    double mx = 0;
    GridFunction u = g;
    for (int i = 0; i + 2 <= n; ++i) {
        u = apply_U(map, u);
        mx = std::max(mx, u.sup_norm());
    }
    rep.cond_exp_resid = std::max(rep.p_xi_sup, mx);
    return rep;
}

struct PjqRow {
    int j = 0;
    double lhs = 0;     // ||P^j phi||_q
    double pairing = 0; // int (P^j phi) sgn(P^j phi) dmu = ||P^j phi||_1
    double rhs = 0;     // pairing^{1/q} ||phi||_B^{1/q} ||phi||_inf^{1-1/q}
    bool pass = false;
};

// With psi = sgn(P^j phi): ||P^j phi||_q <= Cor^{1/q} ||phi||_B^{1/q}
// ||phi||_inf^{1-1/q}, the correlation taken un-normalized as the duality
// pairing.  q = 1 is an identity (lhs == pairing).
inline std::vector<PjqRow> pjq_check(const UlamOperator& op, const PiecewiseMap& map, Observable phi,
                                     double q, int j_max) {
    if (q < 1.0) throw precondition_error("pjq_check: q must be >= 1");
    if (!op.mu_mode) throw precondition_error("pjq_check: operator must be mu-mode");
    (void)map;
    GridFunction phig = sample_on_grid(op.grid, [&](double x) { return phi(point1(x)); });
    double m = grid_integral_mu(op, phig);
    for (auto& x : phig.v) x -= m;
    double sup_phi = phi.norms_known() ? phi.sup_norm : phig.sup_norm();
    double norm_B = phi.norms_known() ? phi.holder_norm() : sup_phi + seminorm_bv(phig);

    std::vector<PjqRow> rows;
    GridFunction g = phig;
    for (int j = 1; j <= j_max; ++j) {
        g = apply_P(op, g);
        PjqRow row;
        row.j = j;
        row.lhs = grid_norm_mu(op, g, q);
        row.pairing = grid_norm_mu(op, g, 1.0); // = int (P^j phi) sgn(P^j phi) dmu
        row.rhs = std::pow(row.pairing, 1.0 / q) * std::pow(norm_B, 1.0 / q) *
                  std::pow(sup_phi, 1.0 - 1.0 / q);
        row.pass = row.lhs <= row.rhs + 1e-9;
        rows.push_back(row);
    }
    return rows;
}

// --- exact finite-state oracles --------------------------------------------------

// Small Markov chain with a per-state observable; enumeration oracle for the
// Azuma-Hoeffding and Rio inequalities.
struct ExactChain {
    std::vector<std::vector<double>> P; // row-stochastic
    std::vector<double> init;
    std::vector<double> obs;

    std::size_t states() const { return init.size(); }

    void validate() const {
        if (P.size() != states() || obs.size() != states() || states() == 0 || states() > 12)
            throw precondition_error("ExactChain: up to 12 states, square transition matrix");
        double s0 = 0;
        for (double p : init) s0 += p;
        if (std::fabs(s0 - 1.0) > 1e-12) throw precondition_error("ExactChain: init law must sum to 1");
        for (const auto& row : P) {
            if (row.size() != states()) throw precondition_error("ExactChain: ragged transition row");
            double s = 0;
            for (double p : row) s += p;
            if (std::fabs(s - 1.0) > 1e-12) throw precondition_error("ExactChain: rows must sum to 1");
        }
    }

    // (P^m g)(s)
    std::vector<double> push_obs(int m) const {
        std::vector<double> g = obs;
        for (int it = 0; it < m; ++it) {
            std::vector<double> next(states(), 0.0);
            for (std::size_t s = 0; s < states(); ++s)
                for (std::size_t t = 0; t < states(); ++t) next[s] += P[s][t] * g[t];
            g = std::move(next);
        }
        return g;
    }
};

inline ExactChain fair_coin_chain() {
    ExactChain c;
    c.P = {{0.5, 0.5}, {0.5, 0.5}};
    c.init = {0.5, 0.5};
    c.obs = {1.0, -1.0};
    return c;
}

struct AzumaReport {
    double bound = 0;          // exp(-n b^2 / (2 a^2))
    double empirical = 0;      // fraction of trials with sum >= n b
    double exact = std::numeric_limits<double>::quiet_NaN(); // enumerable cases
    bool exact_available = false;
};

namespace detail {

// P(Bin(n, 1/2) >= k), summed smallest-first for accuracy
inline double binomial_upper_tail(int n, int k) {
    if (k <= 0) return 1.0;
    if (k > n) return 0.0;
    long double log2n = n * std::log(2.0L);
    long double total = 0;
    for (int j = n; j >= k; --j) {
        long double lc = std::lgamma(n + 1.0L) - std::lgamma(j + 1.0L) - std::lgamma(n - j + 1.0L);
        total += std::exp(lc - log2n);
    }
    return double(total);
}

} // namespace detail

// Azuma-Hoeffding on martingale increments D_i = g(s_i) - E(g(s_i)|s_{i-1}).
// For the fair +-1 coin the exact tail is the binomial sum; small chains are
// enumerated exactly.  Throws if an exact tail ever exceeds the bound.
inline AzumaReport azuma_check(const ExactChain& chain, double a, double b, int n,
                               std::size_t trials, std::uint64_t seed) {
    chain.validate();
    if (!(a > 0)) throw precondition_error("azuma_check: need a > 0");
    if (b < 0) throw precondition_error("azuma_check: need b >= 0");
    if (n < 1) throw precondition_error("azuma_check: need n >= 1");

    const std::size_t S = chain.states();
    std::vector<double> pg(S, 0.0); // (P g)(s)
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t t = 0; t < S; ++t) pg[s] += chain.P[s][t] * chain.obs[t];
    double init_mean = 0;
    for (std::size_t s = 0; s < S; ++s) init_mean += chain.init[s] * chain.obs[s];

    // precondition ||D||_inf <= a
    double dmax = 0;
    for (std::size_t s = 0; s < S; ++s) dmax = std::max(dmax, std::fabs(chain.obs[s] - init_mean));
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t t = 0; t < S; ++t)
            if (chain.P[s][t] > 0) dmax = std::max(dmax, std::fabs(chain.obs[t] - pg[s]));
    if (dmax > a + 1e-12)
        throw precondition_error("azuma_check: increment bound a is smaller than max |D_i|");

    AzumaReport rep;
    rep.bound = std::exp(-double(n) * b * b / (2.0 * a * a));

    bool coin = S == 2 && chain.obs[0] == 1.0 && chain.obs[1] == -1.0 && chain.P[0][0] == 0.5 &&
                chain.P[1][0] == 0.5 && chain.init[0] == 0.5;
    if (coin) {
        // sum X_i >= n b  <=>  heads >= ceil(n (1 + b) / 2)
        int k = int(std::ceil(double(n) * (1.0 + b) / 2.0 - 1e-12));
        rep.exact = detail::binomial_upper_tail(n, k);
        rep.exact_available = true;
    } else {
        double paths = std::pow(double(S), double(n));
        if (paths <= 1e7) {
            double tail = 0;
            struct Frame { std::size_t state; double prob, sum; };
            std::vector<Frame> cur;
            for (std::size_t s0 = 0; s0 < S; ++s0)
                if (chain.init[s0] > 0)
                    cur.push_back({s0, chain.init[s0], chain.obs[s0] - init_mean});
            for (int step = 2; step <= n; ++step) {
                std::vector<Frame> next;
                next.reserve(cur.size() * S);
                for (const Frame& f : cur)
                    for (std::size_t t = 0; t < S; ++t)
                        if (chain.P[f.state][t] > 0)
                            next.push_back({t, f.prob * chain.P[f.state][t],
                                            f.sum + chain.obs[t] - pg[f.state]});
                cur = std::move(next);
            }
            for (const Frame& f : cur)
                if (f.sum >= double(n) * b - 1e-12) tail += f.prob;
            rep.exact = tail;
            rep.exact_available = true;
        }
    }

    // Monte Carlo, one stream per trial
    std::vector<std::uint8_t> hits(trials, 0);
    parallel_for(trials, [&](std::size_t t) {
        Rng rng(derive_stream(seed ^ label_stream("azuma"), t));
        // sample initial state
        double u = rng.uniform01(), acc = 0;
        std::size_t s = 0;
        for (std::size_t i = 0; i < S; ++i) {
            acc += chain.init[i];
            if (u <= acc) { s = i; break; }
            s = i;
        }
        double sum = chain.obs[s] - init_mean;
        for (int step = 2; step <= n; ++step) {
            double v = rng.uniform01(), c = 0;
            std::size_t nxt = S - 1;
            for (std::size_t i = 0; i < S; ++i) {
                c += chain.P[s][i];
                if (v <= c) { nxt = i; break; }
            }
            sum += chain.obs[nxt] - pg[s];
            s = nxt;
        }
        hits[t] = sum >= double(n) * b - 1e-12 ? 1 : 0;
    });
    double cnt = 0;
    for (auto h : hits) cnt += h;
    rep.empirical = cnt / double(trials);

    if (rep.exact_available && rep.exact > rep.bound * (1.0 + 1e-12))
        throw numeric_error("azuma_check: exact tail exceeds the Azuma-Hoeffding bound");
    return rep;
}

struct RioReport {
    double lhs = 0; // ||X_1 + ... + X_n||_{2p}^2
    double rhs = 0; // 4p sum_i max_u ||X_i sum_{k=i..u} E(X_k|F_i)||_p
    bool holds = false;
};

// Exact two-sided evaluation of Rio's inequality by path enumeration.  The
// conditional expectations come from the chain law: E(X_k | F_i) = (P^{k-i} g)(s_i).
inline RioReport rio_check(const ExactChain& chain, double p, int n) {
    chain.validate();
    if (p < 1.0) throw precondition_error("rio_check: p must be >= 1");
    if (n < 1) throw precondition_error("rio_check: n must be >= 1");
    const std::size_t S = chain.states();
    if (std::pow(double(S), double(n)) > 1e7)
        throw precondition_error("enumeration-budget: states^n exceeds 1e7 paths");

    // marginal law of s_i
    std::vector<std::vector<double>> marg(std::size_t(n), chain.init);
    for (int i = 1; i < n; ++i) {
        std::vector<double> next(S, 0.0);
        for (std::size_t s = 0; s < S; ++s)
            for (std::size_t t = 0; t < S; ++t) next[t] += marg[std::size_t(i - 1)][s] * chain.P[s][t];
        marg[std::size_t(i)] = std::move(next);
    }

    // E|S_n|^{2p} by path enumeration
    struct Frame { std::size_t state; double prob, sum; };
    std::vector<Frame> cur;
    for (std::size_t s = 0; s < S; ++s)
        if (chain.init[s] > 0) cur.push_back({s, chain.init[s], chain.obs[s]});
    for (int step = 2; step <= n; ++step) {
        std::vector<Frame> next;
        next.reserve(cur.size() * S);
        for (const Frame& f : cur)
            for (std::size_t t = 0; t < S; ++t)
                if (chain.P[f.state][t] > 0)
                    next.push_back({t, f.prob * chain.P[f.state][t], f.sum + chain.obs[t]});
        cur = std::move(next);
    }
    double moment = 0;
    for (const Frame& f : cur) moment += f.prob * std::pow(std::fabs(f.sum), 2.0 * p);

    RioReport rep;
    rep.lhs = std::pow(moment, 1.0 / p); // ||S||_{2p}^2

    // P^m g tables up to n
    std::vector<std::vector<double>> pg(std::size_t(n), chain.obs);
    for (int m = 1; m < n; ++m) pg[std::size_t(m)] = chain.push_obs(m);

    double total = 0;
    for (int i = 1; i <= n; ++i) {
        double best = 0;
        for (int u = i; u <= n; ++u) {
            // Y = X_i * sum_{k=i}^u (P^{k-i} g)(s_i), a function of s_i
            double norm_p = 0;
            for (std::size_t s = 0; s < S; ++s) {
                double inner = 0;
                for (int k = i; k <= u; ++k) inner += pg[std::size_t(k - i)][s];
                norm_p += marg[std::size_t(i - 1)][s] * std::pow(std::fabs(chain.obs[s] * inner), p);
            }
            best = std::max(best, std::pow(norm_p, 1.0 / p));
        }
        total += best;
    }
    rep.rhs = 4.0 * p * total;
    rep.holds = rep.lhs <= rep.rhs + 1e-9;
    return rep;
}

} // namespace ergolab

#endif
