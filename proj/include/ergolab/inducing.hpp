#ifndef ERGOLAB_INDUCING_HPP
#define ERGOLAB_INDUCING_HPP

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "ergolab/common.hpp"
#include "ergolab/correlation.hpp"
#include "ergolab/ensemble.hpp"
#include "ergolab/maps.hpp"
#include "ergolab/rng.hpp"

namespace ergolab {

struct InducedCell {
    Interval cell;  // subinterval of the base
    int R = 0;      // constant return time on the cell
    std::vector<int> word; // branch indices of f^R restricted to the cell
    Interval image; // f^R(cell), must cover the base
    double mass = 0;
};

struct InducedMap {
    PiecewiseMap map;
    Interval base;
    std::vector<InducedCell> cells; // sorted by cell.lo
    double residual = 0;            // unresolved mass at depth n_max
    int n_max = 0;
    bool tail_complete = false;

    const InducedCell* locate(double x) const {
        auto it = std::upper_bound(cells.begin(), cells.end(), x,
                                   [](double v, const InducedCell& c) { return v < c.cell.lo; });
        if (it == cells.begin()) return nullptr;
        --it;
        return x <= it->cell.hi ? &*it : nullptr;
    }

    // f^R via the stored branch word (valid on the cell)
    double apply_word(const std::vector<int>& word, double x) const {
        for (int b : word) x = map.branches[std::size_t(b)].fwd(x);
        return x;
    }

    double word_derivative(const std::vector<int>& word, double x) const {
        double d = 1.0;
        for (int b : word) {
            d *= map.branches[std::size_t(b)].deriv(x);
            x = map.branches[std::size_t(b)].fwd(x);
        }
        return d;
    }
};

namespace detail {

// Branch inverses memoized per branch: first-return expansions re-pull the
// same boundary values through the same inverse chain at every depth, so the
// memo turns the O(depth^2) pullback walks into hash lookups.
struct MemoInverse {
    const PiecewiseMap* map;
    mutable std::vector<std::unordered_map<double, double>> memo;

    explicit MemoInverse(const PiecewiseMap& m) : map(&m), memo(m.branches.size()) {}

    double operator()(int b, double y) const {
        auto& cache = memo[std::size_t(b)];
        auto it = cache.find(y);
        if (it != cache.end()) return it->second;
        const Branch& br = map->branches[std::size_t(b)];
        if (!br.inv) throw precondition_error("first_return_partition: branch has no inverse");
        double x = std::clamp(br.inv(y), br.dom.lo, br.dom.hi);
        cache.emplace(y, x);
        return x;
    }

    double pullback(const std::vector<int>& word, double y) const {
        for (auto it = word.rbegin(); it != word.rend(); ++it) y = (*this)(*it, y);
        return y;
    }
};

struct ActivePiece {
    Interval pre;  // preimage inside the base
    Interval img;  // current image f^depth(pre)
    std::vector<int> word;
};

} // namespace detail

// First-return partition of the base by exact branch-inverse expansion.
// Cells are resolved breadth-first in return time; whatever has not returned
// by n_max stays as residual mass.
inline InducedMap first_return_partition(const PiecewiseMap& map, Interval base, int n_max) {
    if (map.dim != 1) throw precondition_error("unsupported-dimension: inducing is 1-D only");
    if (n_max < 1) throw precondition_error("first_return_partition: n_max must be >= 1");
    if (!(base.length() > 0) || base.lo < map.domain.lo - 1e-12 || base.hi > map.domain.hi + 1e-12)
        throw precondition_error("first_return_partition: base must be a subinterval of the domain");

    InducedMap ind;
    ind.map = map;
    ind.base = base;
    ind.n_max = n_max;

    detail::MemoInverse inv(ind.map);
    const double len_tol = 1e-15;
    const double markov_tol = 1e-10;

    std::vector<detail::ActivePiece> active{{base, base, {}}};
    for (int depth = 1; depth <= n_max && !active.empty(); ++depth) {
        std::vector<detail::ActivePiece> next;
        for (auto& piece : active) {
            // split the current image along branch boundaries
            std::vector<double> cuts{piece.img.lo};
            for (const Branch& br : ind.map.branches) {
                if (br.dom.lo > piece.img.lo + len_tol && br.dom.lo < piece.img.hi - len_tol)
                    cuts.push_back(br.dom.lo);
                if (br.dom.hi > piece.img.lo + len_tol && br.dom.hi < piece.img.hi - len_tol)
                    cuts.push_back(br.dom.hi);
            }
            cuts.push_back(piece.img.hi);
            std::sort(cuts.begin(), cuts.end());
            for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
                Interval seg{cuts[c], cuts[c + 1]};
                if (seg.length() <= len_tol) continue;
                int b = ind.map.branch_index(seg.mid());
                const Branch& br = ind.map.branches[std::size_t(b)];
                double ya = br.fwd(seg.lo), yb = br.fwd(seg.hi);
                Interval img{std::min(ya, yb), std::max(ya, yb)};
                std::vector<int> word = piece.word;
                word.push_back(b);

                Interval inside = img.intersect(base);
                if (!inside.empty(len_tol)) {
                    if (std::fabs(inside.lo - base.lo) > markov_tol ||
                        std::fabs(inside.hi - base.hi) > markov_tol)
                        throw numeric_error(
                            "non-Markov-base: a first-return image fails to cover the base");
                    double pa = inv.pullback(word, inside.lo);
                    double pb = inv.pullback(word, inside.hi);
                    InducedCell cell;
                    cell.cell = {std::min(pa, pb), std::max(pa, pb)};
                    cell.R = depth;
                    cell.word = word;
                    cell.image = inside;
                    cell.mass = cell.cell.length();
                    ind.cells.push_back(std::move(cell));
                }
                for (Interval out : {Interval{img.lo, std::min(img.hi, base.lo)},
                                     Interval{std::max(img.lo, base.hi), img.hi}}) {
                    if (out.empty(len_tol)) continue;
                    double pa = inv.pullback(word, out.lo);
                    double pb = inv.pullback(word, out.hi);
                    next.push_back({{std::min(pa, pb), std::max(pa, pb)}, out, word});
                }
            }
        }
        active = std::move(next);
    }

    ind.residual = 0;
    for (const auto& piece : active) ind.residual += piece.pre.length();
    ind.tail_complete = ind.residual < 1e-6;
    std::sort(ind.cells.begin(), ind.cells.end(),
              [](const InducedCell& a, const InducedCell& b) { return a.cell.lo < b.cell.lo; });
    return ind;
}

// m(R > n) for n = 1..n_max; the residual is unreturned mass and therefore
// contributes to every tail value (upper-bound flag when incomplete).
inline DecaySeries tail_series(const InducedMap& ind) {
    std::vector<double> by_time(std::size_t(ind.n_max) + 1, 0.0);
    for (const auto& c : ind.cells) by_time[std::size_t(c.R)] += c.mass;
    DecaySeries out;
    std::vector<double> suffix(std::size_t(ind.n_max) + 2, 0.0);
    for (int n = ind.n_max; n >= 1; --n)
        suffix[std::size_t(n)] = suffix[std::size_t(n) + 1] + by_time[std::size_t(n)];
    for (int n = 1; n <= ind.n_max; ++n) {
        out.ns.push_back(double(n));
        out.values.push_back(suffix[std::size_t(n) + 1] + ind.residual);
        out.se.push_back(0.0);
    }
    return out;
}

struct GibbsMarkovReport {
    double markov_resid = 0;      // max endpoint mismatch of f^R(cell) vs base
    std::vector<int> failing_cells;
    double lambda_hat = 0;        // max over samples of ||DF^{-1}||
    double K_hat = 0;             // fitted distortion constant (10% headroom)
    double margin = 0;            // min over pairs of K_hat lambda^s - |ratio-1|
    std::size_t pairs_checked = 0;
    std::size_t cells_skipped = 0; // below double-precision resolution
    bool markov_pass = false, expansion_pass = false, distortion_pass = false;

    bool pass_all() const { return markov_pass && expansion_pass && distortion_pass; }
};

// Definition-1 conditions: (1) Markov images re-derived from the branch words
// at the stored endpoints, (2) uniform expansion of F = f^R, (3) bounded
// distortion against lambda^{+s} with s the separation time of the image pair.
// The pass tolerance for (1) scales with |DF| at the endpoint: re-evaluating
// f^R amplifies the 1e-15 endpoint arithmetic by the cell's expansion, so a
// fixed cutoff would reject exact constructions on deep cells.  Cells
// narrower than double-precision resolution are skipped and counted.
inline GibbsMarkovReport verify_gibbs_markov(const InducedMap& ind, int sample_per_cell,
                                             std::uint64_t seed = 11, int separation_cap = 40) {
    GibbsMarkovReport rep;
    if (ind.cells.empty()) throw precondition_error("verify_gibbs_markov: no cells");
    Rng rng(derive_stream(seed, label_stream("gibbs-markov")));
    const double min_cell = 1e-13;

    for (std::size_t ci = 0; ci < ind.cells.size(); ++ci) {
        const auto& c = ind.cells[ci];
        if (c.cell.length() < min_cell) {
            ++rep.cells_skipped;
            continue;
        }
        double ia = ind.apply_word(c.word, c.cell.lo);
        double ib = ind.apply_word(c.word, c.cell.hi);
        double lo = std::min(ia, ib), hi = std::max(ia, ib);
        double resid = std::max(std::fabs(lo - ind.base.lo), std::fabs(hi - ind.base.hi));
        double df = std::fabs(ind.word_derivative(c.word, c.cell.mid()));
        double tol = std::max(1e-9, df * 2e-14);
        rep.markov_resid = std::max(rep.markov_resid, resid);
        if (resid > tol) rep.failing_cells.push_back(int(ci));
    }
    rep.markov_pass = rep.failing_cells.empty();

    // lambda_hat = max cell sup of ||DF^{-1}||
    for (const auto& c : ind.cells) {
        if (c.cell.length() < min_cell) continue;
        for (int s = 0; s < std::max(2, sample_per_cell); ++s) {
            double t = (s + 0.5) / std::max(2, sample_per_cell);
            double x = c.cell.lo + t * c.cell.length();
            double d = std::fabs(ind.word_derivative(c.word, x));
            if (d > 0) rep.lambda_hat = std::max(rep.lambda_hat, 1.0 / d);
        }
    }
    rep.expansion_pass = rep.lambda_hat < 1.0;

    // distortion on same-cell pairs; separation time from the induced orbit
    auto induced_step = [&](double x) -> const InducedCell* { return ind.locate(x); };
    double k_raw = 0;
    double min_margin_dev = kInfDist;
    std::vector<std::pair<double, double>> devs; // (dev, lambda^s)
    for (const auto& c : ind.cells) {
        if (c.cell.length() < min_cell) continue;
        for (int s = 0; s < sample_per_cell; ++s) {
            double x = rng.uniform(c.cell.lo, c.cell.hi);
            double y = rng.uniform(c.cell.lo, c.cell.hi);
            if (x == y) continue;
            double dx = ind.word_derivative(c.word, x);
            double dy = ind.word_derivative(c.word, y);
            if (dy == 0) continue;
            double dev = std::fabs(dx / dy - 1.0);
            double fx = ind.apply_word(c.word, x), fy = ind.apply_word(c.word, y);
            int sep = 0;
            for (int it = 0; it < separation_cap; ++it) {
                const InducedCell* cx = induced_step(fx);
                const InducedCell* cy = induced_step(fy);
                if (!cx || !cy || cx != cy) break;
                ++sep;
                fx = ind.apply_word(cx->word, fx);
                fy = ind.apply_word(cy->word, fy);
            }
            double lam_s = std::pow(rep.lambda_hat, sep);
            if (lam_s > 0) k_raw = std::max(k_raw, dev / lam_s);
            devs.push_back({dev, lam_s});
            ++rep.pairs_checked;
        }
    }
    rep.K_hat = k_raw > 0 ? 1.1 * k_raw : 0.0;
    for (auto& [dev, lam_s] : devs)
        min_margin_dev = std::min(min_margin_dev, rep.K_hat * lam_s - dev);
    rep.margin = rep.pairs_checked > 0 ? min_margin_dev : 0.0;
    rep.distortion_pass = std::isfinite(rep.K_hat) && rep.margin >= -1e-12;
    return rep;
}

struct KacReport {
    double m_integral = 0;  // int_base R dm
    double mu_integral = std::numeric_limits<double>::quiet_NaN(); // int_base R dmu-hat
};

// int_base R dm by exact cell masses; with a density estimate also the
// mu-weighted integral, which Kac pins at 1 for an ergodic acip.
inline KacReport kac_check(const InducedMap& ind, const DensityHistogram* mu_hat = nullptr) {
    if (!ind.tail_complete && ind.residual >= 1e-6)
        throw precondition_error("incomplete-tail: resolve more cells before integrating R");
    KacReport rep;
    for (const auto& c : ind.cells) rep.m_integral += double(c.R) * c.mass;
    if (mu_hat) {
        double s = 0;
        for (const auto& c : ind.cells) {
            // integrate the histogram density over the cell
            double cell_mu = 0;
            for (std::size_t b = 0; b + 1 < mu_hat->edges.size(); ++b) {
                double lo = std::max(c.cell.lo, mu_hat->edges[b]);
                double hi = std::min(c.cell.hi, mu_hat->edges[b + 1]);
                if (hi > lo)
                    cell_mu += mu_hat->mass[b] * (hi - lo) / (mu_hat->edges[b + 1] - mu_hat->edges[b]);
            }
            s += double(c.R) * cell_mu;
        }
        rep.mu_integral = s;
    }
    return rep;
}

// Lebesgue-exact variant: int_base R dmu for mu = m (doubling testbed)
inline KacReport kac_check_lebesgue(const InducedMap& ind) {
    KacReport rep = kac_check(ind);
    rep.mu_integral = rep.m_integral; // dmu/dm = 1
    return rep;
}

} // namespace ergolab

#endif
