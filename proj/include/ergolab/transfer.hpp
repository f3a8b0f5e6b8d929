#ifndef ERGOLAB_TRANSFER_HPP
#define ERGOLAB_TRANSFER_HPP

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ergolab/common.hpp"
#include "ergolab/grid.hpp"
#include "ergolab/maps.hpp"
#include "ergolab/parallel.hpp"
#include "ergolab/rng.hpp"

namespace ergolab {

// Row-stochastic Ulam discretization: T[i][j] = m(B_i ∩ f^{-1} B_j) / m(B_i),
// stored sparsely (each row touches only the bins its branch images overlap).
// Lebesgue-mode by default; with_invariant_density() switches to the
// mu-conjugated operator used by the martingale machinery:
// P_mu(phi) = P_m(h phi) / h.
struct UlamOperator {
    Grid grid;
    std::vector<std::vector<std::pair<int, double>>> rows;
    std::vector<double> h; // invariant density per bin (mu-mode only)
    bool mu_mode = false;
    std::string reference = "lebesgue";

    int size() const { return grid.n; }

    double row_sum(int i) const {
        double s = 0;
        for (auto& [j, t] : rows[std::size_t(i)]) s += t;
        return s;
    }

    // P_m on grid functions (uniform bins): out_j = sum_i T_ij g_i
    std::vector<double> apply_transpose(const std::vector<double>& g) const {
        std::vector<double> out(g.size(), 0.0);
        for (int i = 0; i < size(); ++i)
            for (auto& [j, t] : rows[std::size_t(i)]) out[std::size_t(j)] += t * g[std::size_t(i)];
        return out;
    }

    // conditional average over image bins: out_i = sum_j T_ij psi_j
    std::vector<double> apply_markov(const std::vector<double>& psi) const {
        std::vector<double> out(psi.size(), 0.0);
        for (int i = 0; i < size(); ++i) {
            double s = 0;
            for (auto& [j, t] : rows[std::size_t(i)]) s += t * psi[std::size_t(j)];
            out[std::size_t(i)] = s;
        }
        return out;
    }
};

inline UlamOperator ulam(const PiecewiseMap& map, int N) {
    if (N < 2) throw precondition_error("ulam: N must be >= 2");
    if (map.dim != 1) throw precondition_error("unsupported-dimension: Ulam discretization is 1-D only");
    UlamOperator op;
    op.grid = Grid::uniform(map.domain.lo, map.domain.hi, N);
    op.rows.assign(std::size_t(N), {});
    const Grid& g = op.grid;
    const double w = g.width();

    for (const Branch& br : map.branches) {
        double ylo = br.fwd(br.dom.lo), yhi = br.fwd(br.dom.hi);
        double xlo = br.dom.lo, xhi = br.dom.hi;
        if (ylo > yhi) std::swap(ylo, yhi);
        ylo = std::max(ylo, g.lo);
        yhi = std::min(yhi, g.hi);
        if (!(yhi > ylo)) continue;

        // x-breakpoints = branch preimages of the bin edges inside the image;
        // interior values are shared between adjacent columns, so row sums
        // telescope exactly.
        int jlo = g.bin_of(ylo + 1e-15 * w), jhi = g.bin_of(yhi - 1e-15 * w);
        std::vector<double> ys, xs;
        ys.push_back(ylo);
        for (int j = jlo + 1; j <= jhi; ++j) ys.push_back(g.edges[std::size_t(j)]);
        ys.push_back(yhi);
        xs.reserve(ys.size());
        for (double y : ys) {
            double x;
            if (br.inv) {
                x = std::clamp(br.inv(y), xlo, xhi);
            } else {
                // quadrature fallback: bisect the forward map
                double lo = xlo, hi = xhi;
                for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
                    double mid = 0.5 * (lo + hi);
                    bool below = br.increasing ? (br.fwd(mid) < y) : (br.fwd(mid) > y);
                    (below ? lo : hi) = mid;
                }
                x = 0.5 * (lo + hi);
            }
            xs.push_back(x);
        }
        for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
            int col = jlo + int(k);
            double xa = xs[k], xb = xs[k + 1];
            if (!br.increasing) std::swap(xa, xb);
            if (xa > xb) std::swap(xa, xb);
            if (!(xb > xa)) continue;
            int ra = g.bin_of(xa + 1e-15 * w), rb = g.bin_of(xb - 1e-15 * w);
            for (int r = ra; r <= rb; ++r) {
                double lo = std::max(xa, g.edges[std::size_t(r)]);
                double hi = std::min(xb, g.edges[std::size_t(r) + 1]);
                if (hi > lo) op.rows[std::size_t(r)].push_back({col, (hi - lo) / w});
            }
        }
    }

    // merge duplicate columns per row
    for (auto& row : op.rows) {
        std::sort(row.begin(), row.end());
        std::size_t out = 0;
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (out > 0 && row[out - 1].first == row[k].first)
                row[out - 1].second += row[k].second;
            else
                row[out++] = row[k];
        }
        row.resize(out);
    }
    return op;
}

struct SpectralReport {
    GridFunction h;          // leading eigenvector, normalized to integral 1
    double lambda1 = 1.0;
    double q = std::numeric_limits<double>::quiet_NaN(); // |second eigenvalue|
    bool gap_resolved = false;
    double C_bound = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
};

inline double seminorm_bv(const GridFunction& phi) {
    double s = 0;
    for (std::size_t i = 0; i + 1 < phi.v.size(); ++i) s += std::fabs(phi.v[i + 1] - phi.v[i]);
    return s;
}

namespace detail {

inline std::vector<double> power_limit(const UlamOperator& op, std::vector<double> pi, double tol,
                                       int& iters_out, int cap = 100000) {
    double best = kInfDist;
    int stall = 0;
    for (int it = 0; it < cap; ++it) {
        std::vector<double> next = op.apply_transpose(pi);
        double diff = 0, norm = 0;
        for (std::size_t i = 0; i < pi.size(); ++i) {
            diff += std::fabs(next[i] - pi[i]);
            norm += std::fabs(next[i]);
        }
        for (auto& x : next) x /= norm;
        pi = std::move(next);
        iters_out = it + 1;
        if (diff < tol) return pi;
        // rounding floor: the iteration rattles below ~1e-9 without further
        // improvement once the fixed point is resolved to arithmetic precision
        if (diff < 0.999 * best) {
            best = diff;
            stall = 0;
        } else if (++stall > 2000 && best < 1e-9) {
            return pi;
        }
    }
    throw numeric_error("leading_mode: power iteration failed to converge in 1e5 iterations");
}

} // namespace detail

// Power iteration for the invariant density.  Runs from two distinct starts;
// gap_resolved reports whether both converged to the same fixed density
// (a permutation-like operator keeps its start and fails the comparison).
inline SpectralReport leading_mode(const UlamOperator& op, double tol = 1e-13) {
    const int N = op.size();
    const double w = op.grid.width();
    std::vector<double> u(std::size_t(N), 1.0 / N);
    std::vector<double> p(std::size_t(N), 0.0);
    double two_pi = 2.0 * std::acos(-1.0);
    double s = 0;
    for (int i = 0; i < N; ++i) {
        p[std::size_t(i)] = 1.0 + 0.5 * std::cos(two_pi * (i + 0.5) / N);
        s += p[std::size_t(i)];
    }
    for (auto& x : p) x /= s;

    SpectralReport rep;
    int it1 = 0, it2 = 0;
    std::vector<double> lim1 = detail::power_limit(op, u, tol, it1);
    rep.iterations = it1;
    try {
        // probe start: if it stalls or lands elsewhere, the leading
        // eigenspace is not resolved (permutation-like operator)
        std::vector<double> lim2 = detail::power_limit(op, p, tol, it2, 30000);
        rep.iterations = std::max(it1, it2);
        double dist = 0;
        for (std::size_t i = 0; i < lim1.size(); ++i) dist += std::fabs(lim1[i] - lim2[i]);
        rep.gap_resolved = dist <= std::max(1000.0 * tol, 1e-9);
    } catch (const numeric_error&) {
        rep.gap_resolved = false;
    }

    std::vector<double> t = op.apply_transpose(lim1);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        num += std::fabs(t[i]);
        den += std::fabs(lim1[i]);
    }
    rep.lambda1 = num / den;

    rep.h = GridFunction(op.grid);
    for (int i = 0; i < N; ++i) rep.h.v[std::size_t(i)] = lim1[std::size_t(i)] / w;
    double hmin = rep.h.v[0];
    for (double x : rep.h.v) hmin = std::min(hmin, x);
    rep.C_bound = (seminorm_bv(rep.h) + 1.0) / std::max(hmin, 1e-12);
    return rep;
}

inline UlamOperator with_invariant_density(const UlamOperator& op, double tol = 1e-13) {
    UlamOperator out = op;
    SpectralReport rep = leading_mode(op, tol);
    out.h = rep.h.v;
    out.mu_mode = true;
    out.reference = "invariant";
    return out;
}

// modulus of the second-largest eigenvalue
inline double spectral_gap(const UlamOperator& op) {
    const int N = op.size();
    if (N <= 4096) {
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(N, N);
        for (int i = 0; i < N; ++i)
            for (auto& [j, t] : op.rows[std::size_t(i)]) T(i, j) += t;
        Eigen::EigenSolver<Eigen::MatrixXd> es(T, /*computeEigenvectors=*/false);
        std::vector<double> mags(std::size_t(N), 0.0);
        for (int i = 0; i < N; ++i) mags[std::size_t(i)] = std::abs(es.eigenvalues()[i]);
        std::sort(mags.begin(), mags.end(), std::greater<>());
        return mags[1];
    }
    // deflated power iteration: subtract the invariant direction and track
    // the contraction rate of what remains
    SpectralReport lead = leading_mode(op);
    const double w = op.grid.width();
    std::vector<double> pi(std::size_t(N), 0.0);
    for (int i = 0; i < N; ++i) pi[std::size_t(i)] = lead.h.v[std::size_t(i)] * w;
    Rng rng(20240531);
    std::vector<double> v(std::size_t(N), 0.0);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    double q = 0, prev_q = -1;
    int stable = 0;
    for (int it = 0; it < 100000; ++it) {
        double sum = 0, norm = 0;
        for (double x : v) sum += x;
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= pi[i] * sum;
        std::vector<double> next = op.apply_transpose(v);
        for (double x : next) norm += std::fabs(x);
        double vnorm = 0;
        for (double x : v) vnorm += std::fabs(x);
        if (vnorm == 0) return 0.0;
        q = norm / vnorm;
        for (auto& x : next) x /= norm;
        v = std::move(next);
        if (std::fabs(q - prev_q) < 1e-12 * std::max(1.0, q)) {
            if (++stable >= 16) return q;
        } else {
            stable = 0;
        }
        prev_q = q;
    }
    throw numeric_error("spectral_gap: deflated power iteration failed to converge");
}

// --- grid-level operators -------------------------------------------------

// P_mu phi = P_m(h phi)/h (mu-mode); plain P_m otherwise unavailable here.
inline GridFunction apply_P(const UlamOperator& op, const GridFunction& phi) {
    require_same_grid(op.grid, phi.grid);
    if (!op.mu_mode)
        throw precondition_error("apply_P: operator is not mu-mode (call with_invariant_density)");
    std::vector<double> weighted(phi.v.size());
    for (std::size_t i = 0; i < phi.v.size(); ++i) weighted[i] = phi.v[i] * op.h[i];
    std::vector<double> pushed = op.apply_transpose(weighted);
    GridFunction out(phi.grid);
    for (std::size_t i = 0; i < pushed.size(); ++i)
        out.v[i] = pushed[i] / std::max(op.h[i], 1e-12);
    return out;
}

// Lebesgue transfer step on grid densities
inline GridFunction apply_Pm(const UlamOperator& op, const GridFunction& phi) {
    require_same_grid(op.grid, phi.grid);
    return GridFunction(phi.grid, op.apply_transpose(phi.v));
}

// Koopman step: compose with the map on bin centers
inline GridFunction apply_U(const PiecewiseMap& map, const GridFunction& phi) {
    GridFunction out(phi.grid);
    for (int i = 0; i < phi.grid.n; ++i) {
        double y = map.step1(phi.grid.center(i));
        out.v[std::size_t(i)] = phi.v[std::size_t(phi.grid.bin_of(y))];
    }
    return out;
}

// E_mu(phi | f^{-i} M) realized through (P4): U^i P^i
inline GridFunction cond_expect(const UlamOperator& op, const PiecewiseMap& map,
                                const GridFunction& phi, int i) {
    GridFunction g = phi;
    for (int k = 0; k < i; ++k) g = apply_P(op, g);
    for (int k = 0; k < i; ++k) g = apply_U(map, g);
    return g;
}

inline double grid_integral_mu(const UlamOperator& op, const GridFunction& g) {
    if (!op.mu_mode) throw precondition_error("grid_integral_mu: operator is not mu-mode");
    double s = 0;
    const double w = op.grid.width();
    for (std::size_t i = 0; i < g.v.size(); ++i) s += g.v[i] * op.h[i] * w;
    return s;
}

inline double grid_norm_mu(const UlamOperator& op, const GridFunction& g, double p) {
    if (std::isinf(p)) return g.sup_norm();
    double s = 0;
    const double w = op.grid.width();
    for (std::size_t i = 0; i < g.v.size(); ++i)
        s += std::pow(std::fabs(g.v[i]), p) * op.h[i] * w;
    return std::pow(s, 1.0 / p);
}

struct OperatorIdentityReport {
    double r_p1 = 0; // |int P phi - int phi|
    double r_p2 = 0; // |int (P phi) psi - int phi (psi o f)|
    double r_p3 = 0; // ||P U phi - phi||_inf
    double r_p5 = 0; // max_p ||P phi||_p - ||phi||_p  (should be <= 0)
};

inline OperatorIdentityReport check_operator_identities(const UlamOperator& op, const PiecewiseMap& map,
                                                        const GridFunction& phi, const GridFunction& psi) {
    require_same_grid(op.grid, phi.grid);
    require_same_grid(op.grid, psi.grid);
    OperatorIdentityReport rep;
    GridFunction Pphi = apply_P(op, phi);
    rep.r_p1 = std::fabs(grid_integral_mu(op, Pphi) - grid_integral_mu(op, phi));

    GridFunction prod(phi.grid), comp(phi.grid);
    GridFunction Upsi = apply_U(map, psi);
    for (std::size_t i = 0; i < prod.v.size(); ++i) {
        prod.v[i] = Pphi.v[i] * psi.v[i];
        comp.v[i] = phi.v[i] * Upsi.v[i];
    }
    rep.r_p2 = std::fabs(grid_integral_mu(op, prod) - grid_integral_mu(op, comp));

    GridFunction PU = apply_P(op, apply_U(map, phi));
    double r3 = 0;
    for (std::size_t i = 0; i < PU.v.size(); ++i) r3 = std::max(r3, std::fabs(PU.v[i] - phi.v[i]));
    rep.r_p3 = r3;

    double r5 = -kInfDist;
    for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()})
        r5 = std::max(r5, grid_norm_mu(op, Pphi, p) - grid_norm_mu(op, phi, p));
    rep.r_p5 = r5;
    return rep;
}

// --- seminorms --------------------------------------------------------------

namespace detail {

struct RangeMinMax {
    // sparse tables over the grid values
    std::vector<std::vector<double>> mx, mn;
    explicit RangeMinMax(const std::vector<double>& v) {
        int n = int(v.size()), levels = 1;
        while ((1 << levels) <= n) ++levels;
        mx.assign(std::size_t(levels), v);
        mn.assign(std::size_t(levels), v);
        for (int l = 1; l < levels; ++l)
            for (int i = 0; i + (1 << l) <= n; ++i) {
                mx[std::size_t(l)][std::size_t(i)] =
                    std::max(mx[std::size_t(l - 1)][std::size_t(i)],
                             mx[std::size_t(l - 1)][std::size_t(i + (1 << (l - 1)))]);
                mn[std::size_t(l)][std::size_t(i)] =
                    std::min(mn[std::size_t(l - 1)][std::size_t(i)],
                             mn[std::size_t(l - 1)][std::size_t(i + (1 << (l - 1)))]);
            }
    }
    std::pair<double, double> query(int a, int b) const { // inclusive
        int len = b - a + 1, l = 0;
        while ((2 << l) <= len) ++l;
        double hi = std::max(mx[std::size_t(l)][std::size_t(a)],
                             mx[std::size_t(l)][std::size_t(b - (1 << l) + 1)]);
        double lo = std::min(mn[std::size_t(l)][std::size_t(a)],
                             mn[std::size_t(l)][std::size_t(b - (1 << l) + 1)]);
        return {hi, lo};
    }
};

} // namespace detail

// sup over a geometric eps ladder of eps^{-alpha} int osc(phi, B_eps(x)) dx.
// Ambient conventions: phi extended by zero outside its support (the stated
// multidimensional-class definition), or periodic for circle maps (windows
// wrap, no boundary oscillation).  16 levels from eps0 down to eps0/256.
enum class Ambient { zero_extension, periodic };

inline double seminorm_quasi_holder(const GridFunction& phi, double alpha, double eps0,
                                    Ambient ambient = Ambient::zero_extension) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw precondition_error("seminorm: quasi-Hölder needs alpha in (0,1)");
    if (!(eps0 > 0.0)) throw precondition_error("seminorm: eps0 must be positive");
    const Grid& g = phi.grid;
    const int N = g.n;
    // periodic ambient: duplicate the values on both sides so windows wrap
    std::vector<double> vals = phi.v;
    if (ambient == Ambient::periodic) {
        vals.resize(std::size_t(3 * N));
        for (int i = 0; i < N; ++i)
            vals[std::size_t(i)] = vals[std::size_t(i + 2 * N)] = phi.v[std::size_t(i)];
        for (int i = 0; i < N; ++i) vals[std::size_t(i + N)] = phi.v[std::size_t(i)];
    }
    detail::RangeMinMax rmq(vals);
    double best = 0;
    const double ratio = std::pow(1.0 / 256.0, 1.0 / 15.0);
    double eps = eps0;
    const double w = g.width();
    for (int level = 0; level < 16; ++level, eps *= ratio) {
        std::vector<double> cuts;
        cuts.reserve(6 * g.edges.size());
        for (double e : g.edges) {
            cuts.push_back(e - eps);
            cuts.push_back(e + eps);
            if (ambient == Ambient::periodic) {
                // wrapped windows change content at shifted edge copies too
                double L = g.hi - g.lo;
                cuts.push_back(e - L - eps);
                cuts.push_back(e - L + eps);
                cuts.push_back(e + L - eps);
                cuts.push_back(e + L + eps);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        double integral = 0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            double a = cuts[k], b = cuts[k + 1];
            if (!(b > a)) continue;
            double xm = 0.5 * (a + b);
            double wlo = xm - eps, whi = xm + eps;
            if (ambient == Ambient::periodic) {
                if (xm < g.lo || xm >= g.hi) continue; // one period only
                // window as offsets into the tripled array
                int iL = N + int(std::floor((wlo - g.lo) / w));
                int iR = N + int(std::floor((whi - g.lo) / w - 1e-12));
                iL = std::clamp(iL, 0, 3 * N - 1);
                iR = std::clamp(iR, iL, 3 * N - 1);
                auto [hi, lo] = rmq.query(iL, iR);
                integral += (hi - lo) * (b - a);
                continue;
            }
            if (whi <= g.lo || wlo >= g.hi) continue; // window sees only the zero extension
            int iL = g.bin_of(std::max(wlo, g.lo) + 1e-15);
            int iR = g.bin_of(std::min(whi, g.hi) - 1e-15);
            if (iR < iL) continue;
            auto [hi, lo] = rmq.query(iL, iR);
            if (wlo < g.lo || whi > g.hi) { // zero extension participates
                hi = std::max(hi, 0.0);
                lo = std::min(lo, 0.0);
            }
            integral += (hi - lo) * (b - a);
        }
        best = std::max(best, integral / std::pow(eps, alpha));
    }
    return best;
}

inline double seminorm(const GridFunction& phi, const std::string& kind, double alpha = 0.5,
                       double eps0 = 0.1) {
    if (kind == "bv") return seminorm_bv(phi);
    if (kind == "quasi_holder") return seminorm_quasi_holder(phi, alpha, eps0);
    if (kind == "quasi_holder_periodic")
        return seminorm_quasi_holder(phi, alpha, eps0, Ambient::periodic);
    throw precondition_error("seminorm: kind must be 'bv' or 'quasi_holder'");
}

// --- Lasota-Yorke fit -------------------------------------------------------

struct LasotaYorkeFit {
    int n0 = 1;
    double alpha_hat = 0;
    double beta_hat = 0;
};

// Smallest remainder weight beta on a fixed grid for which the envelope
// seminorm ratio drops below 1 (with margin), then the envelope alpha at that
// beta.  The trial set always contains single-bin spikes so the L1 slack
// cannot rescue a map with no genuine BV contraction.
inline LasotaYorkeFit lasota_yorke_fit(const PiecewiseMap& map, int N, int trials, std::uint64_t seed) {
    if (map.dim != 1) throw precondition_error("unsupported-dimension: Lasota-Yorke fit is 1-D only");
    UlamOperator op = ulam(map, N);
    Rng rng(derive_stream(seed, label_stream("lasota-yorke")));
    const double w = op.grid.width();

    std::vector<std::vector<double>> tests;
    for (int t = 0; t < trials; ++t) {
        int jumps = 2 + int(rng.next_below(11));
        std::vector<int> pos;
        for (int k = 0; k < jumps; ++k) pos.push_back(int(rng.next_below(std::uint64_t(N))));
        std::sort(pos.begin(), pos.end());
        std::vector<double> v(std::size_t(N), 0.0);
        double level = rng.uniform(-1.0, 1.0);
        std::size_t seg = 0;
        for (int i = 0; i < N; ++i) {
            while (seg < pos.size() && pos[seg] == i) {
                level = rng.uniform(-1.0, 1.0);
                ++seg;
            }
            v[std::size_t(i)] = level;
        }
        tests.push_back(std::move(v));
    }
    for (int k = 0; k < 8; ++k) {
        std::vector<double> spike(std::size_t(N), 0.0);
        spike[std::size_t((N * k) / 8)] = 1.0;
        tests.push_back(std::move(spike));
    }

    const double margin = 0.98;
    const std::vector<double> beta_grid = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0};

    std::vector<std::vector<double>> current = tests;
    for (int n0 = 1; n0 <= 8; ++n0) {
        for (auto& v : current) v = op.apply_transpose(v);
        std::vector<double> V(tests.size()), L1(tests.size()), VP(tests.size());
        for (std::size_t t = 0; t < tests.size(); ++t) {
            GridFunction f0(op.grid, tests[t]), fn(op.grid, current[t]);
            V[t] = seminorm_bv(f0);
            VP[t] = seminorm_bv(fn);
            double l1 = 0;
            for (double x : tests[t]) l1 += std::fabs(x) * w;
            L1[t] = l1;
        }
        for (double beta : beta_grid) {
            double alpha = 0;
            for (std::size_t t = 0; t < tests.size(); ++t) {
                if (V[t] <= 0) continue;
                alpha = std::max(alpha, (VP[t] - beta * L1[t]) / V[t]);
            }
            alpha = std::max(alpha, 0.0);
            if (alpha < margin) return {n0, alpha, beta};
        }
    }
    throw numeric_error("fit-failure: no Lasota-Yorke contraction found up to n0 = 8");
}

// --- Saussol's multidimensional condition ------------------------------------

struct SaussolResult {
    double value = 0;
    bool pass = false;
};

inline double unit_ball_volume(int k) {
    double pi = std::acos(-1.0);
    return std::pow(pi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

inline SaussolResult saussol_condition(double s, double alpha, double Y, int N_dim) {
    if (!(s > 0.0 && s < 1.0)) throw precondition_error("saussol_condition: s must be in (0,1)");
    if (!(alpha > 0.0 && alpha < 1.0)) throw precondition_error("saussol_condition: alpha must be in (0,1)");
    if (!(Y >= 1.0)) throw precondition_error("saussol_condition: Y must be >= 1");
    if (N_dim < 1) throw precondition_error("saussol_condition: N_dim must be >= 1");
    double value = std::pow(s, alpha) +
                   (4.0 * s / (1.0 - s)) * Y * unit_ball_volume(N_dim - 1) / unit_ball_volume(N_dim);
    return {value, value < 1.0};
}

} // namespace ergolab

#endif
