// Command-line front end: run one experiment, sweep seeds, or print the
// cost table for a set of adversary scenarios.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "flspec/cost.hpp"
#include "flspec/harness.hpp"

using nlohmann::json;

namespace {

int cmd_run(const std::string& config_path, std::uint64_t seed, const std::string& out_dir) {
    flspec::ExperimentConfig cfg = flspec::load_config(config_path);
    flspec::ExperimentReport report = flspec::run_experiment(cfg, seed);
    flspec::emit_report(report, out_dir);
    std::cout << "max_test_accuracy=" << report.max_test_accuracy
              << " attack_impact=" << report.attack_impact
              << " attack_cost=" << report.attack_cost << "\n";
    std::cout << "wrote " << out_dir << "/rounds.csv and " << out_dir << "/summary.json\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir) {
    flspec::ExperimentConfig cfg = flspec::load_config(config_path);
    flspec::SweepReport report = flspec::run_seed_sweep(cfg);
    flspec::emit_report(report, out_dir);
    std::cout << "median_max_accuracy=" << report.median_max_accuracy
              << " median_attack_impact=" << report.median_attack_impact
              << " attack_cost=" << report.attack_cost << "\n";
    std::cout << "wrote per-seed CSVs and summary.json to " << out_dir << "\n";
    return 0;
}

int cmd_cost(const std::string& config_path) {
    std::ifstream f(config_path);
    if (!f) {
        std::cerr << "cannot open config: " << config_path << "\n";
        return 1;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    json j = json::parse(ss.str());

    flspec::CostParams params;
    if (j.contains("cost")) {
        const json& c = j.at("cost");
        std::string mode = c.value("mode", "botnet");
        params.mode = mode == "unit" ? flspec::CostMode::UnitCosts : flspec::CostMode::Botnet;
        params.device_price = c.value("device_price", 1.0);
        params.app_prevalence = c.value("app_prevalence", 0.01);
        params.fake_unit_cost = c.value("fake_unit_cost", 1.0);
        params.compromised_unit_cost = c.value("compromised_unit_cost", 100.0);
    }
    if (!j.contains("scenarios")) {
        std::cerr << "missing field: scenarios\n";
        return 1;
    }

    std::cout << "scenario,n_compromised,n_malicious,cost\n";
    for (const auto& s : j.at("scenarios")) {
        flspec::AdversaryCounts adv;
        adv.n_benign = s.value("n_benign", 0);
        adv.n_compromised = s.value("n_compromised", 0);
        adv.n_fake = s.value("n_fake", 0);
        const std::string name = s.value("name", "scenario");
        const int m = adv.n_compromised + adv.n_fake;
        std::cout << name << "," << adv.n_compromised << "," << m << ","
                  << flspec::attack_cost(adv, params) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flspectrum: federated-learning poisoning testbed"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 1;

    auto* run = app.add_subcommand("run", "Run one experiment (attacked + paired clean baseline)");
    run->add_option("--config", config_path, "Experiment config JSON")->required();
    run->add_option("--seed", seed, "Master seed");
    run->add_option("--out", out_dir, "Output directory");

    auto* sweep = app.add_subcommand("sweep", "Run the configured seed sweep");
    sweep->add_option("--config", config_path, "Experiment config JSON")->required();
    sweep->add_option("--out", out_dir, "Output directory");

    auto* cost = app.add_subcommand("cost", "Print the cost table for a scenarios config");
    cost->add_option("--config", config_path, "Scenarios config JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, seed, out_dir);
        if (sweep->parsed()) return cmd_sweep(config_path, out_dir);
        if (cost->parsed()) return cmd_cost(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
