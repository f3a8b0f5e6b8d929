#ifndef ERGOLAB_CONFIG_HPP
#define ERGOLAB_CONFIG_HPP

#include <map>
#include <memory>
#include <set>
#include <string>

#include <json.hpp>

#include "ergolab/bounds.hpp"
#include "ergolab/common.hpp"
#include "ergolab/maps.hpp"
#include "ergolab/observable.hpp"

namespace ergolab {

// A batch experiment: one kind, one map, fixed numeric parameters, one seed.
// Seeds are mandatory; nothing ever reads the wall clock.
struct ExperimentConfig {
    std::string kind;
    std::string map_family;
    std::map<std::string, double> map_params;
    nlohmann::json observable;  // {"name": ..., extra params}
    nlohmann::json observable2; // psi (correlation)
    nlohmann::json params;      // per-kind numeric parameters
    std::uint64_t seed = 0;
    std::string out_dir = ".";
};

inline const std::set<std::string>& experiment_kinds() {
    static const std::set<std::string> kinds{"density",    "correlation", "ldev",
                                             "martingale", "bounds",      "induce",
                                             "spectral",   "nondegeneracy"};
    return kinds;
}

inline Observable build_observable(const nlohmann::json& spec, const PiecewiseMap& map) {
    std::string name = spec.value("name", "coordinate");
    Interval dom = map.domain;
    if (name == "coordinate") return coordinate_observable(dom);
    if (name == "coordinate_centered") {
        double c = dom.mid();
        auto o = make_observable("coordinate_centered", [c](const Point& p) { return p[0] - c; }, 1.0, dom);
        o.with_exact_norms(0.5 * dom.length(), 1.0);
        return o;
    }
    if (name == "sine") {
        // Lipschitz-1 smooth observable
        double two_pi = 2.0 * std::acos(-1.0), L = dom.length(), lo = dom.lo;
        auto o = make_observable(
            "sine", [=](const Point& p) { return std::sin(two_pi * (p[0] - lo) / L) * L / two_pi; }, 1.0,
            dom);
        o.with_exact_norms(L / two_pi, 1.0);
        return o;
    }
    if (name == "sqrt") {
        double lo = dom.lo;
        auto o = make_observable("sqrt", [lo](const Point& p) { return std::sqrt(std::max(0.0, p[0] - lo)); },
                                 0.5, dom);
        o.with_exact_norms(std::sqrt(dom.length()), 1.0);
        return o;
    }
    if (name == "indicator") {
        double a = spec.value("a", dom.lo), b = spec.value("b", dom.mid());
        auto o = make_observable(
            "indicator", [a, b](const Point& p) { return (p[0] >= a && p[0] <= b) ? 1.0 : 0.0; }, 1.0, dom);
        o.sup_norm = 1.0;
        o.sup_prov = Provenance::exact;
        return o;
    }
    if (name == "constant") return constant_observable(spec.value("value", 1.0), dom);
    if (name == "fiber_coordinate") {
        if (map.dim != 2)
            throw precondition_error("invalid-parameter: fiber_coordinate needs a 2-D map");
        auto o = make_observable("fiber_coordinate", [](const Point& p) { return p[1]; }, 1.0, map.fiber);
        o.with_exact_norms(std::max(std::fabs(map.fiber.lo), std::fabs(map.fiber.hi)), 1.0);
        return o;
    }
    if (name == "log_deriv_inv") return expansion_observable(map);
    if (name == "dist_log") {
        double delta = spec.value("delta", 0.1);
        auto [p1, p2] = special_observables(map, delta);
        (void)p1;
        return p2;
    }
    if (name == "cell_indicator_plm3") {
        // partition-constant observable for the 3-branch Markov testbed
        auto o = make_observable(
            "cell_indicator_plm3", [](const Point& p) { return p[0] <= 1.0 / 3.0 ? 1.0 : 0.0; }, 1.0, dom);
        o.sup_norm = 1.0;
        o.sup_prov = Provenance::exact;
        return o;
    }
    throw precondition_error("invalid-parameter: unknown observable '" + name + "'");
}

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    ExperimentConfig cfg;
    if (!j.is_object()) throw precondition_error("config: top level must be a JSON object");
    if (!j.contains("kind") || !j["kind"].is_string())
        throw precondition_error("config: missing string field 'kind'");
    cfg.kind = j["kind"].get<std::string>();
    if (!experiment_kinds().count(cfg.kind))
        throw precondition_error("config: unknown kind '" + cfg.kind + "'");
    if (!j.contains("seed") || !j["seed"].is_number_integer())
        throw precondition_error("config: missing integer field 'seed' (no wall-clock seeding)");
    cfg.seed = j["seed"].get<std::uint64_t>();

    if (cfg.kind != "bounds") {
        if (!j.contains("map") || !j["map"].is_object() || !j["map"].contains("family"))
            throw precondition_error("config: missing map.family");
        cfg.map_family = j["map"]["family"].get<std::string>();
        for (auto& [k, v] : j["map"].items())
            if (k != "family") cfg.map_params[k] = v.get<double>();
    }
    cfg.observable = j.value("observable", nlohmann::json::object());
    cfg.observable2 = j.value("observable2", nlohmann::json::object());
    cfg.params = j.value("params", nlohmann::json::object());
    cfg.out_dir = j.value("out", std::string("."));
    return cfg;
}

// full validation: everything that can fail before numeric work starts
inline void validate_config(const ExperimentConfig& cfg) {
    if (cfg.kind != "bounds") {
        PiecewiseMap map = make_map(cfg.map_family, cfg.map_params);
        if (!cfg.observable.empty()) build_observable(cfg.observable, map);
        if (!cfg.observable2.empty()) build_observable(cfg.observable2, map);
    }
    auto positive = [&](const char* key) {
        if (cfg.params.contains(key) && !(cfg.params[key].get<double>() > 0))
            throw precondition_error(std::string("config: parameter '") + key + "' must be positive");
    };
    for (const char* key : {"count", "bins", "n_max", "N", "eps", "k", "delta", "n"}) positive(key);
    if (cfg.kind == "bounds") {
        std::string regime = cfg.params.value("regime", "");
        if (regime != "polynomial" && regime != "stretched" && regime != "exponential")
            throw precondition_error("config: bounds kind needs regime polynomial|stretched|exponential");
    }
}

} // namespace ergolab

#endif
