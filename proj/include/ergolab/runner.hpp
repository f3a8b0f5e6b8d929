#ifndef ERGOLAB_RUNNER_HPP
#define ERGOLAB_RUNNER_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ergolab/config.hpp"
#include "ergolab/correlation.hpp"
#include "ergolab/ensemble.hpp"
#include "ergolab/inducing.hpp"
#include "ergolab/io.hpp"
#include "ergolab/martingale.hpp"
#include "ergolab/transfer.hpp"

namespace ergolab {

namespace detail {

inline nlohmann::json series_summary(const DecaySeries& s) {
    nlohmann::json j;
    j["points"] = s.ns.size();
    if (!s.ns.empty()) {
        j["n_first"] = s.ns.front();
        j["n_last"] = s.ns.back();
        j["value_first"] = s.values.front();
        j["value_last"] = s.values.back();
    }
    return j;
}

inline CsvTable series_csv(const DecaySeries& s, bool with_raw) {
    CsvTable t;
    t.header = with_raw ? std::vector<std::string>{"n", "value", "raw", "stderr"}
                        : std::vector<std::string>{"n", "value", "stderr"};
    for (std::size_t i = 0; i < s.ns.size(); ++i) {
        if (with_raw)
            t.rows.push_back({s.ns[i], s.values[i], s.raw[i], s.se[i]});
        else
            t.rows.push_back({s.ns[i], s.values[i], s.se[i]});
    }
    return t;
}

inline nlohmann::json fit_json(const RateFit& f) {
    nlohmann::json j;
    j["family"] = rate_family_name(f.family);
    if (f.family == RateFamily::polynomial) j["beta"] = f.beta;
    if (f.family == RateFamily::stretched) {
        j["tau"] = f.tau;
        j["theta"] = f.theta;
    }
    if (f.family == RateFamily::exponential) j["tau"] = f.tau;
    j["r2"] = f.r2;
    j["residual_max"] = f.residual_max;
    return j;
}

} // namespace detail

// Runs one experiment and writes its report bundle (summary.json + CSV
// series) into out_dir.  Fully deterministic for a fixed config.
inline nlohmann::json run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    std::filesystem::path out(cfg.out_dir);
    std::filesystem::create_directories(out);

    nlohmann::json summary;
    summary["kind"] = cfg.kind;
    summary["seed"] = cfg.seed;

    PiecewiseMap map;
    if (cfg.kind != "bounds") {
        map = make_map(cfg.map_family, cfg.map_params);
        summary["map"] = cfg.map_family;
        for (auto& [k, v] : map.params) summary["map_params"][k] = v;
    }
    const auto& P = cfg.params;

    if (cfg.kind == "density") {
        auto ens = simulate_ensemble(map, P.value("count", std::size_t(100000)),
                                     P.value("burn_in", 1000), cfg.seed);
        auto hist = empirical_density(ens, P.value("bins", 64));
        CsvTable t;
        t.header = {"bin_left", "bin_right", "mass"};
        for (std::size_t b = 0; b + 1 < hist.edges.size(); ++b)
            t.rows.push_back({hist.edges[b], hist.edges[b + 1], hist.mass[b]});
        write_csv(out / "density.csv", t);
        summary["count"] = hist.count;
        summary["bins"] = hist.mass.size();
        double total = 0;
        for (double m : hist.mass) total += m;
        summary["mass_total"] = total;
    } else if (cfg.kind == "correlation") {
        Observable phi = build_observable(cfg.observable, map);
        Observable psi = cfg.observable2.empty() ? phi : build_observable(cfg.observable2, map);
        int n_max = P.value("n_max", 32);
        CorrelationMethod method;
        if (P.value("method", "ulam") == std::string("ulam"))
            method = UlamMethod{P.value("N", 4096)};
        else
            method = EnsembleMethod{P.value("count", std::size_t(100000)), P.value("burn_in", 1000),
                                    cfg.seed};
        auto series = correlation_series(map, phi, psi, n_max, method);
        write_csv(out / "correlation.csv", detail::series_csv(series, true));
        summary["series"] = detail::series_summary(series);
        std::string family = P.value("fit", "auto");
        if (family != "none") summary["fit"] = detail::fit_json(fit_rate(series, family));
    } else if (cfg.kind == "ldev") {
        Observable phi = build_observable(cfg.observable, map);
        double eps = P.value("eps", 0.1);
        std::vector<int> n_grid;
        for (auto& v : P.value("n_grid", nlohmann::json::array({50, 100, 200, 400})))
            n_grid.push_back(v.get<int>());
        auto ens = simulate_ensemble(map, P.value("count", std::size_t(100000)),
                                     P.value("burn_in", 1000), cfg.seed);
        auto series = ld_series(map, phi, eps, n_grid, ens);
        summary["eps"] = eps;
        summary["series"] = detail::series_summary(series);
        if (P.contains("bound")) {
            // combined curve: n, bound, empirical, margin
            BoundParams bp;
            const auto& B = P["bound"];
            std::string regime = B.value("regime", "exponential");
            bp.regime = regime == "polynomial" ? RateFamily::polynomial
                        : regime == "stretched" ? RateFamily::stretched
                                                : RateFamily::exponential;
            bp.eps = eps;
            bp.C = B.value("C", 1.0);
            bp.C_prime = B.value("C_prime", 1.0);
            bp.beta = B.value("beta", 2.0);
            bp.tau = B.value("tau", 1.0);
            bp.theta = B.value("theta", 1.0);
            bp.q = B.value("q", 3.0);
            bp.norm_B = B.value("norm_B", 1.0);
            bp.norm_inf = B.value("norm_inf", 1.0);
            bp.chi_inf = B.value("chi_inf", 1.0);
            CsvTable t;
            t.header = {"n", "bound", "empirical", "margin"};
            bool contained = true;
            for (std::size_t i = 0; i < series.ns.size(); ++i) {
                double bound = ld_bound(bp, series.ns[i]).value;
                double emp = series.values[i];
                t.rows.push_back({series.ns[i], bound, emp, bound - emp});
                contained = contained && emp <= bound;
            }
            write_csv(out / "ldev.csv", t);
            summary["bound_contained"] = contained;
        } else {
            write_csv(out / "ldev.csv", detail::series_csv(series, false));
        }
    } else if (cfg.kind == "martingale") {
        std::string check = P.value("check", "decomposition");
        if (check == "azuma") {
            auto rep = azuma_check(fair_coin_chain(), P.value("a", 1.0), P.value("b", 0.3),
                                   P.value("n", 100), P.value("trials", std::size_t(1000000)),
                                   cfg.seed);
            summary["exact"] = rep.exact;
            summary["bound"] = rep.bound;
            summary["empirical"] = rep.empirical;
            summary["margin"] = rep.bound - rep.exact;
            summary["pass"] = rep.exact <= rep.bound;
        } else if (check == "rio") {
            auto rep = rio_check(fair_coin_chain(), P.value("p", 1.0), P.value("n", 8));
            summary["lhs"] = rep.lhs;
            summary["rhs"] = rep.rhs;
            summary["margin"] = rep.rhs - rep.lhs;
            summary["pass"] = rep.holds;
        } else {
            int N = P.value("N", 4096), k = P.value("k", 10), n = P.value("n", 50);
            std::size_t samples = P.value("samples", std::size_t(1000));
            Observable phi = build_observable(cfg.observable, map);
            UlamOperator op = with_invariant_density(ulam(map, N));
            GridFunction phig = sample_on_grid(op.grid, [&](double x) { return phi(point1(x)); });
            auto dec = decompose(op, map, phig, k, P.value("exponential_mode", false));
            auto mrep = verify_martingale(dec, op, map, n);
            Rng rng(derive_stream(cfg.seed, label_stream("mart-orbits")));
            std::vector<Point> starts(samples);
            for (auto& s : starts) s = map.uniform_point(rng);
            double resid = verify_decomposition(dec, map, starts, n, cfg.seed);
            summary["N"] = N;
            summary["k"] = dec.k;
            summary["p_xi_sup"] = mrep.p_xi_sup;
            summary["cond_exp_resid"] = mrep.cond_exp_resid;
            summary["sn1_residual"] = resid;
            summary["chi_sup"] = dec.chi_sup;
            summary["summable"] = dec.summable;
        }
    } else if (cfg.kind == "bounds") {
        BoundParams bp;
        std::string regime = P.value("regime", "exponential");
        bp.regime = regime == "polynomial" ? RateFamily::polynomial
                    : regime == "stretched" ? RateFamily::stretched
                                            : RateFamily::exponential;
        bp.C = P.value("C", 1.0);
        bp.C_prime = P.value("C_prime", 1.0);
        bp.beta = P.value("beta", 2.0);
        bp.tau = P.value("tau", 1.0);
        bp.theta = P.value("theta", 1.0);
        bp.q = P.value("q", 3.0);
        bp.eps = P.value("eps", 0.1);
        bp.norm_B = P.value("norm_B", 1.0);
        bp.norm_inf = P.value("norm_inf", 1.0);
        bp.chi_inf = P.value("chi_inf", 1.0);
        bp.zeta = P.value("zeta", 1.0);
        bp.gamma_slack = P.value("gamma", 0.1);
        bp.validate();
        summary["regime"] = regime;
        if (bp.regime == RateFamily::stretched) {
            summary["theta_prime"] = theta_prime(bp.theta);
            summary["tau_prime"] = tau_prime(bp.tau, bp.eps, bp.norm_inf);
        }
        if (bp.regime == RateFamily::exponential)
            summary["tau"] = exponential_rate(bp.eps, bp.norm_inf, bp.chi_inf);
        CsvTable t;
        t.header = {"n", "bound"};
        for (auto& v : P.value("n_grid", nlohmann::json::array({10, 100, 1000}))) {
            double n = v.get<double>();
            t.rows.push_back({n, ld_bound(bp, n).value});
        }
        write_csv(out / "bounds.csv", t);
        if (P.contains("tail")) {
            const auto& T = P["tail"];
            RateLaw xi;
            std::string fam = T.value("family", "polynomial");
            xi.family = fam == "exponential" ? RateFamily::exponential
                        : fam == "stretched" ? RateFamily::stretched
                                             : RateFamily::polynomial;
            xi.beta = T.value("beta", 3.0);
            xi.tau = T.value("tau", 1.0);
            xi.theta = T.value("theta", 1.0);
            double c = T.value("c", 1.0);
            CsvTable tt;
            tt.header = {"n", "tail"};
            for (auto& v : T.value("n_grid", nlohmann::json::array({10, 100, 1000}))) {
                double n = v.get<double>();
                tt.rows.push_back({n, tail_from_ld(xi, c, n)});
            }
            write_csv(out / "tail_conversion.csv", tt);
            summary["tail_at_first_n"] = tt.rows.front()[1];
        }
    } else if (cfg.kind == "induce") {
        Interval base{P.value("base_lo", 0.0), P.value("base_hi", 0.5)};
        int n_max = P.value("n_max", 64);
        InducedMap ind = first_return_partition(map, base, n_max);
        CsvTable cells;
        cells.header = {"cell_left", "cell_right", "R", "mass"};
        for (const auto& c : ind.cells)
            cells.rows.push_back({c.cell.lo, c.cell.hi, double(c.R), c.mass});
        write_csv(out / "cells.csv", cells);
        write_csv(out / "tail.csv", detail::series_csv(tail_series(ind), false));
        summary["cells"] = ind.cells.size();
        summary["residual"] = ind.residual;
        summary["tail_complete"] = ind.tail_complete;
        if (ind.tail_complete || ind.residual < 1e-6) {
            auto kac = kac_check(ind);
            summary["kac_m_integral"] = kac.m_integral;
        }
        if (P.value("verify", n_max <= 2000)) {
            auto rep = verify_gibbs_markov(ind, P.value("sample_per_cell", 8), cfg.seed);
            summary["lambda_hat"] = rep.lambda_hat;
            summary["K_hat"] = rep.K_hat;
            summary["markov_resid"] = rep.markov_resid;
            summary["gibbs_markov_pass"] = rep.pass_all();
        }
    } else if (cfg.kind == "spectral") {
        int N = P.value("N", 256);
        UlamOperator op = ulam(map, N);
        SpectralReport rep = leading_mode(op, P.value("tol", 1e-13));
        rep.q = spectral_gap(op);
        summary["lambda1"] = rep.lambda1;
        summary["q"] = rep.q;
        summary["gap_resolved"] = rep.gap_resolved;
        summary["C_bound"] = rep.C_bound;
        if (P.value("measure_decay", false)) {
            // measured correlation decay rate against |second eigenvalue|
            Observable phi = cfg.observable.empty() ? build_observable({{"name", "sine"}}, map)
                                                    : build_observable(cfg.observable, map);
            auto series = correlation_series(map, phi, phi, P.value("decay_n_max", 12), UlamMethod{N});
            DecaySeries raw;
            raw.ns = series.ns;
            raw.values = series.raw;
            auto fit = fit_rate(raw, "exponential");
            summary["decay_rate"] = fit.tau;
            summary["q_measured"] = std::exp(-fit.tau);
        }
        CsvTable t;
        t.header = {"bin_left", "bin_right", "h"};
        for (int i = 0; i < op.grid.n; ++i)
            t.rows.push_back({op.grid.edges[std::size_t(i)], op.grid.edges[std::size_t(i) + 1],
                              rep.h.v[std::size_t(i)]});
        write_csv(out / "density.csv", t);
        if (N <= 1024 && P.value("export_operator", false)) {
            CsvTable opcsv;
            opcsv.header = {"row", "col", "value"};
            for (int i = 0; i < N; ++i)
                for (auto& [j2, v] : op.rows[std::size_t(i)])
                    opcsv.rows.push_back({double(i), double(j2), v});
            write_csv(out / "operator.csv", opcsv);
        }
    } else if (cfg.kind == "nondegeneracy") {
        std::vector<double> eps_grid;
        for (auto& v : P.value("eps_grid", nlohmann::json::array(
                                               {0.2, 0.14, 0.1, 0.07, 0.05, 0.035, 0.02, 0.014, 0.01})))
            eps_grid.push_back(v.get<double>());
        auto rep = check_nondegeneracy(map, P.value("sample_count", std::size_t(200000)), eps_grid,
                                       cfg.seed);
        summary["B_hat"] = rep.B_hat;
        summary["d_hat"] = rep.d_hat;
        summary["eta_hat"] = rep.eta_hat;
        summary["c2_slack"] = rep.c2_slack;
        summary["c3_slack"] = rep.c3_slack;
        summary["pass_c0"] = rep.pass_c0;
        summary["pass_c1"] = rep.pass_c1;
        summary["pass_c2"] = rep.pass_c2;
        summary["pass_c3"] = rep.pass_c3;
        if (cfg.map_family == "viana") {
            auto pp = viana_preperiodicity(map.param("a0", 1.7968));
            summary["a0_preperiodic"] = pp.preperiodic;
            summary["a0_closest_return"] = pp.closest;
        }
    }

    write_json(out / "summary.json", summary);
    return summary;
}

} // namespace ergolab

#endif
