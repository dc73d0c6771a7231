#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "flspec/harness.hpp"
#include "flspec/rng.hpp"

using namespace flspec;

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig cfg;
    cfg.task.num_classes = 3;
    cfg.task.input_dim = 5;
    cfg.task.samples_per_class_train = 40;
    cfg.task.samples_per_class_test = 15;
    cfg.model = {ModelKind::LogisticRegression, 5, 3, 0};
    cfg.train = {1, 0.1, 0.9, 1e-4, 8};
    cfg.rounds = 5;
    cfg.clients_per_round = 6;
    cfg.adversary.n_benign = 20;
    cfg.adversary.n_compromised = 0;
    cfg.adversary.n_fake = 0;
    cfg.seeds = {3};
    return cfg;
}

}  // namespace

TEST_CASE("derive_seed separates streams deterministically") {
    CHECK(derive_seed(1, "a") == derive_seed(1, "a"));
    CHECK(derive_seed(1, "a") != derive_seed(1, "b"));
    CHECK(derive_seed(1, "a") != derive_seed(2, "a"));
    CHECK(derive_seed(1, "a", 0, 0) != derive_seed(1, "a", 1, 0));
    CHECK(derive_seed(1, "a", 0, 0) != derive_seed(1, "a", 0, 1));
}

TEST_CASE("config validation rejects inconsistent setups") {
    auto cfg = tiny_config();
    CHECK_NOTHROW(cfg.validate());

    auto bad = cfg;
    bad.clients_per_round = 100;  // more than the population
    CHECK_THROWS(bad.validate());

    bad = cfg;
    bad.model.input_dim = 7;  // disagrees with the task
    CHECK_THROWS(bad.validate());

    bad = cfg;
    bad.adversary.n_fake = 5;
    bad.adversary.attack.kind = AttackKind::DynOpt;
    bad.adversary.n_compromised = 0;  // hybrid dyn-opt needs compromised data
    CHECK_THROWS(bad.validate());

    bad = cfg;
    bad.aggregator.kind = AggKind::AdaptiveStolen;
    bad.adversary.n_compromised = 0;  // nothing to steal from
    CHECK_THROWS(bad.validate());
}

TEST_CASE("json config round trip and error reporting") {
    auto cfg = tiny_config();
    cfg.adversary.n_compromised = 2;
    cfg.adversary.n_fake = 4;
    cfg.adversary.attack.kind = AttackKind::DynOpt;
    cfg.aggregator.kind = AggKind::TrimmedMean;
    cfg.seeds = {1, 2, 3};

    auto text = config_to_json_string(cfg);
    auto back = config_from_json_string(text);
    CHECK(config_to_json_string(back) == text);
    CHECK(back.adversary.n_fake == 4);
    CHECK(back.aggregator.kind == AggKind::TrimmedMean);
    CHECK(back.seeds == std::vector<std::uint64_t>{1, 2, 3});

    CHECK_THROWS_WITH(config_from_json_string("{}"), doctest::Contains("missing field"));
    auto broken = text;
    broken.replace(broken.find("\"trimmed-mean\""), 14, "\"bogus\"");
    CHECK_THROWS_WITH(config_from_json_string(broken), doctest::Contains("invalid field"));
    CHECK_THROWS(config_from_json_string("not json"));
}

TEST_CASE("clean run: learning happens, report is consistent") {
    auto cfg = tiny_config();
    auto report = run_experiment(cfg, 3);
    CHECK(report.per_round.size() == 5);
    CHECK(report.attack_impact == 0.0);  // no attack: clean baseline is the run itself
    CHECK(report.attack_cost == 0.0);
    CHECK(report.max_test_accuracy == report.clean_max_test_accuracy);
    for (const auto& r : report.per_round) {
        CHECK(r.n_malicious_selected == 0);
        CHECK(r.mean_malicious_update_norm == 0.0);
        CHECK(r.test_accuracy >= 0.0);
        CHECK(r.test_accuracy <= 1.0);
    }
    // Separable blobs + logreg: accuracy should beat chance (1/3) after 5 rounds.
    CHECK(report.max_test_accuracy > 0.40);
}

TEST_CASE("benign trajectory is identical with and without the attack") {
    auto attacked = tiny_config();
    attacked.adversary.n_fake = 10;
    attacked.adversary.attack.kind = AttackKind::FakeMpaf;
    attacked.adversary.n_compromised = 1;  // hybrid: fake data synthesized from it
    auto report = run_experiment(attacked, 7);

    // The paired clean baseline inside run_experiment must equal a standalone
    // clean run with the same master seed and the same real population.
    auto clean = tiny_config();
    clean.adversary.n_benign = 21;
    auto clean_run = run_single(clean, 7);
    CHECK(report.clean_max_test_accuracy == clean_run.max_test_accuracy);
}

TEST_CASE("malicious client accounting and selection rate") {
    auto cfg = tiny_config();
    cfg.adversary.n_benign = 14;
    cfg.adversary.n_compromised = 1;
    cfg.adversary.n_fake = 15;  // 16/30 malicious
    cfg.adversary.attack.kind = AttackKind::FakeMpaf;
    cfg.rounds = 40;
    auto report = run_experiment(cfg, 11);

    long long selected = 0;
    for (const auto& r : report.per_round) {
        CHECK(r.n_malicious_selected >= 0);
        CHECK(r.n_malicious_selected <= cfg.clients_per_round);
        selected += r.n_malicious_selected;
    }
    // E[selected per round] = 6 * 16/30 = 3.2; over 40 rounds expect ~128.
    // A +-40% band is far beyond 3 sigma for sampling without replacement.
    double mean = static_cast<double>(selected) / 40;
    CHECK(mean > 3.2 * 0.6);
    CHECK(mean < 3.2 * 1.4);
}

TEST_CASE("sweep statistics over seeds") {
    auto cfg = tiny_config();
    cfg.rounds = 3;
    cfg.seeds = {1, 2, 3};
    auto sweep = run_seed_sweep(cfg);
    REQUIRE(sweep.per_seed.size() == 3);
    double lo = 1e9, hi = -1e9;
    for (const auto& r : sweep.per_seed) {
        lo = std::min(lo, r.max_test_accuracy);
        hi = std::max(hi, r.max_test_accuracy);
    }
    CHECK(sweep.median_max_accuracy >= lo);
    CHECK(sweep.median_max_accuracy <= hi);
    CHECK(sweep.std_max_accuracy >= 0.0);

    cfg.seeds = {5};
    auto one = run_seed_sweep(cfg);
    CHECK(one.std_max_accuracy == 0.0);
    CHECK(one.median_max_accuracy == one.per_seed[0].max_test_accuracy);
}

TEST_CASE("summary json determinism and csv output") {
    auto cfg = tiny_config();
    cfg.adversary.n_fake = 5;
    cfg.adversary.n_compromised = 1;
    cfg.adversary.n_benign = 19;
    cfg.adversary.attack.kind = AttackKind::FakeMpaf;

    auto a = run_experiment(cfg, 42);
    auto b = run_experiment(cfg, 42);
    CHECK(summary_json(a) == summary_json(b));

    const std::string path = "test_harness_rounds.csv";
    write_rounds_csv(a.per_round, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "round,test_accuracy,test_loss,n_malicious_selected,aggregate_norm,"
          "mean_benign_norm,mean_malicious_norm");
    int rows = 0;
    for (std::string line; std::getline(in, line);) rows += !line.empty();
    CHECK(rows == cfg.rounds);
    in.close();
    std::remove(path.c_str());
}

TEST_CASE("mpaf fake attack degrades accuracy on fedavg") {
    auto cfg = tiny_config();
    cfg.rounds = 15;
    cfg.adversary.n_benign = 18;
    cfg.adversary.n_fake = 2;
    cfg.adversary.attack.kind = AttackKind::FakeMpaf;
    cfg.aggregator.kind = AggKind::FedAvg;
    auto report = run_experiment(cfg, 5);
    // A single lambda=1e6 update per round blows up plain averaging: the global
    // model is dominated by the scaled base model, so the aggregate norms
    // explode and accuracy drops relative to the clean run.
    double peak_norm = 0;
    for (const auto& r : report.per_round) peak_norm = std::max(peak_norm, r.aggregate_norm);
    CHECK(peak_norm > 1e4);
    CHECK(report.attack_impact > 0.05);
}
