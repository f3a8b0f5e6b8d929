// ergolab CLI: batch experiment runner.
//   ergolab run <config.json> [--out DIR] [--workers K] [--seed S]
//   ergolab validate <config.json>
// Exit codes: 0 success, 2 validation error, 3 numeric failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ergolab/ergolab.hpp"

namespace {

nlohmann::json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ergolab::precondition_error("cannot open config file: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ergolab::precondition_error(std::string("config parse error: ") + e.what());
    }
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ergolab: numerical experiments on correlation decay, large deviations, and induced maps"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    unsigned workers = 0;
    std::int64_t seed_override = -1;
    bool have_seed = false;

    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "config JSON file")->required();
    run->add_option("--out", out_dir, "output directory (overrides config)");
    run->add_option("--workers", workers, "worker threads")->envname("ERGOLAB_WORKERS");
    auto* seed_opt = run->add_option("--seed", seed_override, "seed override");

    auto* validate = app.add_subcommand("validate", "validate an experiment config");
    validate->add_option("config", config_path, "config JSON file")->required();

    CLI11_PARSE(app, argc, argv);
    have_seed = seed_opt->count() > 0;

    try {
        nlohmann::json j = load_json(config_path);
        ergolab::ExperimentConfig cfg = ergolab::parse_config(j);
        if (app.got_subcommand(validate)) {
            ergolab::validate_config(cfg);
            std::cout << "ok: " << cfg.kind << "\n";
            return 0;
        }
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (have_seed) cfg.seed = std::uint64_t(seed_override);
        if (workers > 0) ergolab::set_workers(workers);
        nlohmann::json summary = ergolab::run_experiment(cfg);
        std::string text;
        ergolab::canonical_dump(summary, text);
        std::cout << text << "\n";
        return 0;
    } catch (const ergolab::precondition_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const ergolab::numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
