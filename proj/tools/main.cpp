#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bbayes/config.hpp"
#include "bbayes/experiment.hpp"

namespace {

bbayes::ExperimentConfig load_config(const std::string& path,
                                     std::optional<std::uint64_t> seed,
                                     std::optional<std::string> out,
                                     std::optional<std::size_t> replications) {
    auto cfg = bbayes::parse_config_file(path);
    if (seed) cfg.seed = *seed;
    if (out) cfg.out_dir = *out;
    if (replications) cfg.replications = *replications;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sequential probability forecasting: mixture, SR, SRF, chain analysis"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::size_t> replications;
    bool quiet = false;

    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("--config", config_path, "config file path")->required();
    run->add_option("--seed", seed, "master seed (overrides config)");
    run->add_option("--out", out_dir, "output directory (overrides config)");
    run->add_option("--replications", replications, "replication count (overrides config)");
    run->add_flag("--quiet", quiet, "suppress progress output");

    auto* chain = app.add_subcommand("chain", "exact SRF chain analysis for an instance");
    std::string chain_ks = "1";
    chain->add_option("--config", config_path, "config file path")->required();
    chain->add_option("--k", chain_ks, "comma-separated trial lengths");
    chain->add_option("--out", out_dir, "output directory (overrides config)");
    chain->add_flag("--quiet", quiet, "suppress progress output");

    auto* score = app.add_subcommand("score", "recompute score reports from a stored run");
    std::string in_dir;
    score->add_option("--in", in_dir, "run directory")->required();
    score->add_flag("--quiet", quiet, "suppress output");

    auto* compare = app.add_subcommand("compare", "emit gap/ratio series between forecasters");
    std::string forecaster_a = "mixture";
    std::string forecaster_b = "sr";
    std::size_t rep_index = 0;
    std::string compare_config;
    compare->add_option("--in", in_dir, "run directory")->required();
    compare->add_option("--a", forecaster_a, "first forecaster");
    compare->add_option("--b", forecaster_b, "second forecaster");
    compare->add_option("--rep", rep_index, "replication index");
    compare->add_option("--config", compare_config,
                        "config file (enables the truth-ratio series)");
    compare->add_flag("--quiet", quiet, "suppress output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto cfg = load_config(config_path, seed, out_dir, replications);
            bbayes::run_experiment(cfg, /*write_files=*/true, quiet);
        } else if (chain->parsed()) {
            const auto cfg = load_config(config_path, seed, out_dir, replications);
            std::vector<std::size_t> ks;
            std::string tok;
            std::istringstream in(chain_ks);
            while (std::getline(in, tok, ','))
                if (!tok.empty()) ks.push_back(std::stoul(tok));
            bbayes::run_chain_report(cfg, ks, cfg.out_dir, quiet);
        } else if (score->parsed()) {
            bbayes::score_stored_run(in_dir, quiet);
        } else if (compare->parsed()) {
            std::optional<bbayes::ExperimentConfig> cfg;
            if (!compare_config.empty()) cfg = bbayes::parse_config_file(compare_config);
            bbayes::compare_stored_run(in_dir, rep_index, forecaster_a, forecaster_b, cfg,
                                       quiet);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
