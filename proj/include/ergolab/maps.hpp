#ifndef ERGOLAB_MAPS_HPP
#define ERGOLAB_MAPS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ergolab/common.hpp"
#include "ergolab/fit.hpp"
#include "ergolab/rng.hpp"

namespace ergolab {

enum class Family { doubling, intermittent, tent, rotation, quadratic, plm3, viana };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::doubling: return "doubling";
        case Family::intermittent: return "intermittent";
        case Family::tent: return "tent";
        case Family::rotation: return "rotation";
        case Family::quadratic: return "quadratic";
        case Family::plm3: return "plm3";
        case Family::viana: return "viana";
    }
    return "?";
}

// Left branch of the two-branch intermittent (Pomeau-Manneville type) family:
// f(x) = x (1 + 2^g x^g) on [0, 1/2].
inline double lsv_forward(double x, double g) {
    return x * (1.0 + std::pow(2.0, g) * std::pow(x, g));
}

inline double lsv_deriv(double x, double g) {
    return 1.0 + (1.0 + g) * std::pow(2.0, g) * std::pow(x, g);
}

// Safeguarded Newton for the left-branch inverse, tolerance ~1e-15.
inline double lsv_left_inverse(double y, double g) {
    if (y <= 0) return 0.0;
    if (y >= 1) return 0.5;
    double lo = 0.0, hi = 0.5;
    double x = 0.5 * y;
    for (int it = 0; it < 100; ++it) {
        double fx = lsv_forward(x, g) - y;
        if (fx > 0)
            hi = x;
        else
            lo = x;
        double nx = x - fx / lsv_deriv(x, g);
        if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
        if (std::fabs(nx - x) <= 1e-16 * (1.0 + std::fabs(x))) return nx;
        x = nx;
        if (hi - lo < 1e-17) break;
    }
    return x;
}

struct Branch {
    Interval dom;
    std::function<double(double)> fwd;
    std::function<double(double)> deriv;
    std::function<double(double)> inv; // empty when no closed/robust inverse
    bool increasing = true;
    // low-bit refresh scale for measure-typical orbit stepping (0 = none);
    // integer-slope branches shift mantissa bits out and would collapse
    // long double-precision orbits onto dyadic rationals
    double dither = 0.0;
};

class PiecewiseMap {
  public:
    Family family = Family::doubling;
    std::string label;
    std::map<std::string, double> params;
    int dim = 1;
    Interval domain{0.0, 1.0}; // 1-D domain; Viana base circle [0,1)
    Interval fiber{0.0, 1.0};  // Viana fiber interval
    std::vector<Branch> branches;
    std::vector<double> critical; // 1-D critical/singular points

    bool has_critical() const { return dim == 2 || !critical.empty(); }

    double param(const std::string& key, double fallback) const {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    }

    // Branch membership with the boundary tie rule: a point exactly on a
    // boundary belongs to the branch on the left/lower side.
    int branch_index(double x) const {
        if (x < domain.lo - 1e-12 || x > domain.hi + 1e-12)
            throw numeric_error("orbit-escape: point outside domain");
        x = std::clamp(x, domain.lo, domain.hi);
        for (std::size_t b = 0; b < branches.size(); ++b) {
            if (x <= branches[b].dom.hi) {
                if (b == 0) return 0;
                return (x <= branches[b].dom.lo) ? int(b) - 1 : int(b);
            }
        }
        return int(branches.size()) - 1;
    }

    double step1(double x) const {
        const Branch& b = branches[std::size_t(branch_index(x))];
        double y = b.fwd(x);
        if (y < domain.lo - 1e-12 || y > domain.hi + 1e-12)
            throw numeric_error("orbit-escape: image outside domain");
        return std::clamp(y, domain.lo, domain.hi);
    }

    Point step(const Point& p) const {
        if (dim == 1) return point1(step1(p[0]));
        return viana_step(p);
    }

    // One step of a measure-typical orbit: same map, but the low-order bits
    // shifted out by integer-slope branches are refreshed from rng.
    Point step_typical(const Point& p, Rng& rng) const {
        if (dim == 1) {
            const Branch& b = branches[std::size_t(branch_index(p[0]))];
            double y = std::clamp(b.fwd(p[0]), domain.lo, domain.hi);
            if (b.dither > 0) {
                y += rng.uniform01() * b.dither;
                if (y > domain.hi) y -= b.dither;
            }
            return point1(y);
        }
        Point q = viana_step(p);
        double dd = param("d", 16);
        q[0] = fract(q[0] + rng.uniform01() * dd * 0x1.0p-53);
        return q;
    }

    double deriv1(double x) const {
        for (double c : critical)
            if (x == c)
                throw precondition_error("at-critical-point: derivative undefined");
        return branches[std::size_t(branch_index(x))].deriv(x);
    }

    Mat2 deriv2(const Point& p) const {
        double a = param("alpha", 0.01), dd = param("d", 16);
        double two_pi = 2.0 * std::acos(-1.0);
        return Mat2{dd, 0.0, a * two_pi * std::cos(two_pi * p[0]), -2.0 * p[1]};
    }

    // ||Df^{-1}||: 1/|f'| in 1-D, 1/sigma_min for the skew product.
    double deriv_inv_norm(const Point& p) const {
        if (dim == 1) {
            double d = deriv1(p[0]);
            if (d == 0.0) throw precondition_error("at-critical-point: Df singular");
            return 1.0 / std::fabs(d);
        }
        double s = deriv2(p).sigma_min();
        if (s == 0.0) throw precondition_error("at-critical-point: Df singular");
        return 1.0 / s;
    }

    double dist_to_critical(const Point& p) const {
        if (dim == 2) return std::fabs(p[1]); // critical curve {x = 0}
        if (critical.empty()) return kInfDist;
        double best = kInfDist;
        for (double c : critical) best = std::min(best, std::fabs(p[0] - c));
        return best;
    }

    bool in_domain(const Point& p, double tol = 1e-12) const {
        if (dim == 1) return p[0] >= domain.lo - tol && p[0] <= domain.hi + tol;
        return p[1] >= fiber.lo - tol && p[1] <= fiber.hi + tol;
    }

    Point uniform_point(Rng& rng) const {
        if (dim == 1) return point1(rng.uniform(domain.lo, domain.hi));
        return {rng.uniform01(), rng.uniform(fiber.lo, fiber.hi)};
    }

  private:
    Point viana_step(const Point& p) const {
        double a0 = param("a0", 1.7968), a = param("alpha", 0.01), dd = param("d", 16);
        double two_pi = 2.0 * std::acos(-1.0);
        double s = fract(dd * p[0]);
        double x = a0 + a * std::sin(two_pi * p[0]) - p[1] * p[1];
        if (x < fiber.lo - 1e-12 || x > fiber.hi + 1e-12)
            throw numeric_error("orbit-escape: fiber escape");
        return {s, std::clamp(x, fiber.lo, fiber.hi)};
    }
};

namespace detail {

inline Branch linear_branch(Interval dom, double slope, double offset, double dither_slope) {
    Branch b;
    b.dom = dom;
    b.fwd = [slope, offset](double x) { return slope * x + offset; };
    b.deriv = [slope](double) { return slope; };
    b.inv = [slope, offset](double y) { return (y - offset) / slope; };
    b.increasing = slope > 0;
    b.dither = dither_slope > 1.0 ? dither_slope * 0x1.0p-53 : 0.0;
    return b;
}

} // namespace detail

inline PiecewiseMap make_map(const std::string& family, const std::map<std::string, double>& params = {}) {
    PiecewiseMap m;
    m.params = params;
    m.label = family;
    auto p = [&](const std::string& k, double dflt) {
        auto it = params.find(k);
        return it == params.end() ? dflt : it->second;
    };
    if (family == "doubling") {
        m.family = Family::doubling;
        double dd = p("d", 2);
        int d = int(dd);
        if (d < 2 || dd != double(d))
            throw precondition_error("invalid-parameter: doubling needs integer slope d >= 2");
        m.params["d"] = dd;
        for (int k = 0; k < d; ++k)
            m.branches.push_back(detail::linear_branch({double(k) / d, double(k + 1) / d}, double(d), -double(k), double(d)));
    } else if (family == "intermittent") {
        m.family = Family::intermittent;
        // gamma = 1 is allowed for pointwise evaluation; the acip machinery
        // assumes gamma < 1 (finite invariant measure)
        double g = p("gamma", 0.5);
        if (!(g > 0.0 && g <= 1.0))
            throw precondition_error("invalid-parameter: intermittent needs gamma in (0,1]");
        m.params["gamma"] = g;
        Branch left;
        left.dom = {0.0, 0.5};
        left.fwd = [g](double x) { return lsv_forward(x, g); };
        left.deriv = [g](double x) { return lsv_deriv(x, g); };
        left.inv = [g](double y) { return lsv_left_inverse(y, g); };
        m.branches.push_back(left);
        m.branches.push_back(detail::linear_branch({0.5, 1.0}, 2.0, -1.0, 2.0));
    } else if (family == "tent") {
        m.family = Family::tent;
        m.branches.push_back(detail::linear_branch({0.0, 0.5}, 2.0, 0.0, 2.0));
        m.branches.push_back(detail::linear_branch({0.5, 1.0}, -2.0, 2.0, 2.0));
        m.critical = {0.5}; // singular point: Df does not exist
    } else if (family == "rotation") {
        m.family = Family::rotation;
        double w = p("omega", 0.25);
        if (!(w >= 0.0 && w < 1.0))
            throw precondition_error("invalid-parameter: rotation needs omega in [0,1)");
        m.params["omega"] = w;
        if (w == 0.0) {
            m.branches.push_back(detail::linear_branch({0.0, 1.0}, 1.0, 0.0, 0.0));
        } else {
            m.branches.push_back(detail::linear_branch({0.0, 1.0 - w}, 1.0, w, 0.0));
            m.branches.push_back(detail::linear_branch({1.0 - w, 1.0}, 1.0, w - 1.0, 0.0));
        }
    } else if (family == "quadratic") {
        m.family = Family::quadratic;
        double a = p("a", 2.0);
        if (!(a > 1.0 && a <= 2.0))
            throw precondition_error("invalid-parameter: quadratic needs a in (1,2]");
        m.params["a"] = a;
        m.domain = {a - a * a, a}; // forward-invariant core
        m.critical = {0.0};
        Branch left, right;
        left.dom = {m.domain.lo, 0.0};
        left.fwd = [a](double x) { return a - x * x; };
        left.deriv = [](double x) { return -2.0 * x; };
        left.inv = [a](double y) { return -std::sqrt(std::max(0.0, a - y)); };
        left.increasing = true;
        right.dom = {0.0, m.domain.hi};
        right.fwd = left.fwd;
        right.deriv = left.deriv;
        right.inv = [a](double y) { return std::sqrt(std::max(0.0, a - y)); };
        right.increasing = false;
        m.branches.push_back(left);
        m.branches.push_back(right);
    } else if (family == "plm3") {
        // 3-branch piecewise-linear Markov map: slopes 3, 2, 3; the middle
        // branch covers only the first two partition cells, giving the
        // partition-level transfer matrix second eigenvalue 1/6
        m.family = Family::plm3;
        m.branches.push_back(detail::linear_branch({0.0, 1.0 / 3.0}, 3.0, 0.0, 3.0));
        m.branches.push_back(detail::linear_branch({1.0 / 3.0, 2.0 / 3.0}, 2.0, -2.0 / 3.0, 2.0));
        m.branches.push_back(detail::linear_branch({2.0 / 3.0, 1.0}, 3.0, -2.0, 3.0));
    } else if (family == "viana") {
        m.family = Family::viana;
        m.dim = 2;
        double a0 = p("a0", 1.7968), al = p("alpha", 0.01), dd = p("d", 16);
        int d = int(dd);
        if (!(a0 > 1.0 && a0 < 2.0))
            throw precondition_error("invalid-parameter: viana needs a0 in (1,2)");
        if (!(al > 0.0 && al <= 0.5))
            throw precondition_error("invalid-parameter: viana needs alpha in (0, 0.5]");
        if (d < 2 || dd != double(d))
            throw precondition_error("invalid-parameter: viana needs integer d >= 2");
        m.params = {{"a0", a0}, {"alpha", al}, {"d", dd}};
        double amax = a0 + al;
        m.fiber = {a0 - al - amax * amax, amax}; // forward invariant: max of a(s) - x^2
        m.domain = {0.0, 1.0};
    } else {
        throw precondition_error("invalid-parameter: unknown family '" + family + "'");
    }
    return m;
}

// orbit[0] = x0, orbit[i+1] = f(orbit[i]); pure map, no dithering (short
// deterministic orbits; use OrbitSim for statistics over long orbits)
inline std::vector<Point> eval_orbit(const PiecewiseMap& map, const Point& x0, std::size_t n) {
    if (!map.in_domain(x0)) throw numeric_error("orbit-escape: x0 outside domain");
    std::vector<Point> orbit;
    orbit.reserve(n + 1);
    orbit.push_back(x0);
    Point x = x0;
    for (std::size_t i = 0; i < n; ++i) {
        x = map.step(x);
        orbit.push_back(x);
    }
    return orbit;
}

inline double derivative(const PiecewiseMap& map, double x) { return map.deriv1(x); }

inline double dist_to_critical(const PiecewiseMap& map, const Point& p) {
    return map.dist_to_critical(p);
}

// log ||Df^{-1}||, the expansion observable of the tail machinery
inline double log_deriv_inv(const PiecewiseMap& map, const Point& p) {
    return std::log(map.deriv_inv_norm(p));
}

struct NondegReport {
    double B_hat = 0;
    double d_hat = 0;
    double eta_hat = 0;
    double c2_slack = 0;
    double c3_slack = 0;
    bool pass_c0 = false, pass_c1 = false, pass_c2 = false, pass_c3 = false;

    bool pass_all() const { return pass_c0 && pass_c1 && pass_c2 && pass_c3; }
};

// Fits the non-degeneracy constants of (C0)-(C3) from uniform samples.
// Exponents come from log-log regressions, constants are envelopes, and the
// pass flags require every sample to sit within 10% of the fitted law.
inline NondegReport check_nondegeneracy(const PiecewiseMap& map, std::size_t sample_count,
                                        const std::vector<double>& eps_grid, std::uint64_t seed) {
    if (!map.has_critical())
        throw precondition_error("check_nondegeneracy: critical set is empty");
    if (eps_grid.size() < 8)
        throw precondition_error("insufficient-sample: need >= 8 epsilon grid points");
    for (std::size_t i = 0; i + 1 < eps_grid.size(); ++i)
        if (!(eps_grid[i] > eps_grid[i + 1]) || eps_grid.back() <= 0)
            throw precondition_error("check_nondegeneracy: eps_grid must be positive decreasing");

    Rng rng(derive_stream(seed, label_stream("nondeg")));
    std::vector<double> dist, dlog, flog; // distances + log|Df| data
    dist.reserve(sample_count);
    for (std::size_t i = 0; i < sample_count; ++i) {
        Point x = map.uniform_point(rng);
        double d = map.dist_to_critical(x);
        if (d <= 0) continue;
        dist.push_back(d);
        double dfn;
        if (map.dim == 1)
            dfn = std::fabs(map.deriv1(x[0]));
        else
            dfn = map.deriv2(x).sigma_min();
        if (dfn > 0) {
            dlog.push_back(std::log(d));
            flog.push_back(std::log(dfn));
        }
    }

    NondegReport rep;

    // (C0): slope of m{d <= eps} vs eps
    std::vector<double> le, lf;
    double slack_c0 = 1.1;
    for (double e : eps_grid) {
        std::size_t cnt = 0;
        for (double d : dist) cnt += (d <= e);
        if (cnt == 0) continue;
        le.push_back(std::log(e));
        lf.push_back(std::log(double(cnt) / double(dist.size())));
    }
    if (le.size() < 8) throw precondition_error("insufficient-sample: fewer than 8 usable (eps, mass) points");
    LinearFit c0 = linear_fit(le, lf);
    rep.d_hat = c0.slope;
    double B0 = std::exp(c0.intercept);
    rep.pass_c0 = std::isfinite(rep.d_hat) && rep.d_hat > 0 && c0.residual_max <= std::log(slack_c0);

    // (C1): |Df| vs d(x,C) on log scales
    if (dlog.size() < 8) throw precondition_error("insufficient-sample: fewer than 8 derivative samples");
    LinearFit c1 = linear_fit(dlog, flog);
    rep.eta_hat = std::fabs(c1.slope);
    double B1 = std::exp(std::fabs(c1.intercept));
    rep.pass_c1 = std::isfinite(rep.eta_hat) && c1.residual_max <= std::log(slack_c0);
    rep.B_hat = std::max(B0, B1);

    // (C2)/(C3) on pairs ordered by distance to the critical set
    double ratio2 = 0, ratio3 = 0;
    bool finite2 = true, finite3 = true;
    std::size_t pairs = std::max<std::size_t>(1000, sample_count / 4);
    std::vector<double> lhs2v, lhs3v, rhsv;
    for (std::size_t k = 0; k < pairs; ++k) {
        Point x = map.uniform_point(rng), y = map.uniform_point(rng);
        double dx = map.dist_to_critical(x), dy = map.dist_to_critical(y);
        if (dx <= 0 || dy <= 0) continue;
        if (dx > dy) std::swap(x, y), std::swap(dx, dy);
        double rhs = std::fabs(std::log(dy) - std::log(dx));
        double li, lj, mi, mj;
        if (map.dim == 1) {
            double fi = map.deriv1(x[0]), fj = map.deriv1(y[0]);
            if (fi == 0 || fj == 0) continue;
            li = -std::log(std::fabs(fi));
            lj = -std::log(std::fabs(fj));
            mi = std::log(std::fabs(fi));
            mj = std::log(std::fabs(fj));
        } else {
            Mat2 Di = map.deriv2(x), Dj = map.deriv2(y);
            if (Di.sigma_min() == 0 || Dj.sigma_min() == 0) continue;
            li = -std::log(Di.sigma_min());
            lj = -std::log(Dj.sigma_min());
            mi = std::log(std::fabs(Di.det()));
            mj = std::log(std::fabs(Dj.det()));
        }
        double lhs2 = std::fabs(li - lj), lhs3 = std::fabs(mi - mj);
        if (rhs < 1e-12) {
            if (lhs2 > 1e-9) finite2 = false;
            if (lhs3 > 1e-9) finite3 = false;
            continue;
        }
        ratio2 = std::max(ratio2, lhs2 / rhs);
        ratio3 = std::max(ratio3, lhs3 / rhs);
        lhs2v.push_back(lhs2);
        lhs3v.push_back(lhs3);
        rhsv.push_back(rhs);
    }
    double B2 = ratio2, B3 = ratio3;
    rep.c2_slack = -kInfDist;
    rep.c3_slack = -kInfDist;
    for (std::size_t k = 0; k < rhsv.size(); ++k) {
        rep.c2_slack = std::max(rep.c2_slack, lhs2v[k] - slack_c0 * B2 * rhsv[k]);
        rep.c3_slack = std::max(rep.c3_slack, lhs3v[k] - slack_c0 * B3 * rhsv[k]);
    }
    rep.pass_c2 = finite2 && std::isfinite(B2) && rep.c2_slack <= 1e-12;
    rep.pass_c3 = finite3 && std::isfinite(B3) && rep.c3_slack <= 1e-12;
    rep.B_hat = std::max({rep.B_hat, B2, B3});
    return rep;
}

// Numeric pre-periodicity diagnostic for the Viana parameter a0: iterate the
// critical orbit of Q(x) = a0 - x^2 and report the closest return.
struct PreperiodicityReport {
    bool preperiodic = false;
    double closest = kInfDist;
    int hit_i = -1, hit_j = -1;
};

inline PreperiodicityReport viana_preperiodicity(double a0, int depth = 50, double tol = 1e-9) {
    PreperiodicityReport rep;
    std::vector<double> orbit;
    double x = 0.0;
    for (int i = 0; i < depth; ++i) {
        x = a0 - x * x;
        for (int j = 0; j < int(orbit.size()); ++j) {
            double d = std::fabs(x - orbit[j]);
            if (d < rep.closest) {
                rep.closest = d;
                rep.hit_i = int(orbit.size());
                rep.hit_j = j;
            }
        }
        orbit.push_back(x);
    }
    rep.preperiodic = rep.closest <= tol;
    return rep;
}

} // namespace ergolab

#endif
