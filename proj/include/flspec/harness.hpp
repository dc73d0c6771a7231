#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "flspec/aggregation.hpp"
#include "flspec/attacks.hpp"
#include "flspec/cost.hpp"
#include "flspec/data.hpp"
#include "flspec/model.hpp"
#include "flspec/synthesis.hpp"

namespace flspec {

enum class AttackKind { None, FakeMpaf, DynOpt };
enum class SynthKind { Gaussian, Replay };

struct AttackConfig {
    AttackKind kind = AttackKind::None;
    double lambda = 1e6;  // MPAF scale
    PerturbKind perturbation = PerturbKind::InverseStd;
    GammaSearchConfig gamma_search;
    double fixed_gamma_fedavg = 1e6;
    double fixed_gamma_norm_bounding = 10.0;
    // Hybrid adversary also trains its compromised clients for extra references.
    bool use_compromised_refs = false;
};

struct AdversaryModel {
    int n_benign = 0;
    int n_compromised = 0;
    int n_fake = 0;
    AttackConfig attack;

    int total() const { return n_benign + n_compromised + n_fake; }
};

struct ExperimentConfig {
    SyntheticTaskConfig task;
    ModelSpec model;
    TrainConfig train;
    int rounds = 1;
    int clients_per_round = 25;
    double dirichlet_beta = 0.5;
    AdversaryModel adversary;
    AggregatorConfig aggregator;
    std::vector<std::uint64_t> seeds = {1};
    SynthKind synthesizer = SynthKind::Gaussian;
    GaussianSynthConfig synth;
    int samples_per_label = 5;   // fake pool: samples per label per fake client
    int reference_clients = 25;  // adversary optimization pool size
    CostParams cost;

    void validate() const;
};

struct RoundRecord {
    int round = 0;
    double test_accuracy = 0;
    double test_loss = 0;
    int n_malicious_selected = 0;
    double aggregate_norm = 0;
    double mean_benign_update_norm = 0;
    double mean_malicious_update_norm = 0;  // pre-clipping
};

struct RunResult {
    std::vector<RoundRecord> per_round;
    double max_test_accuracy = 0;
};

struct ExperimentReport {
    std::uint64_t seed = 0;
    std::vector<RoundRecord> per_round;  // attacked run
    double max_test_accuracy = 0;
    double clean_max_test_accuracy = 0;
    double attack_impact = 0;  // clean max - attacked max
    double attack_cost = 0;
};

struct SweepReport {
    std::vector<ExperimentReport> per_seed;
    double median_max_accuracy = 0;
    double std_max_accuracy = 0;
    double median_attack_impact = 0;
    double std_attack_impact = 0;
    double attack_cost = 0;
};

// One FL trajectory. All randomness derives from (master seed, purpose tag,
// round, client id) streams, so benign training is identical with and without
// the attack.
class FlSimulation {
public:
    FlSimulation(const ExperimentConfig& cfg, std::uint64_t master_seed);

    RoundRecord run_round(int round_index);
    RunResult run_all();

    const ParameterVector& global() const { return global_; }
    const LabeledDataset& test_set() const { return test_; }
    const PartitionPlan& partition() const { return plan_; }

private:
    ClientRole role_of(int client_id) const;
    LabeledDataset client_dataset(int client_id) const;
    std::vector<ClientUpdate> draft_references(int round_index);
    ParameterVector craft_malicious(int round_index, int m_round,
                                    const std::vector<ClientUpdate>& compromised_updates);
    ParameterVector aggregate(std::vector<ClientUpdate>& updates, int m_round);

    ExperimentConfig cfg_;
    std::uint64_t seed_;
    LabeledDataset train_;
    LabeledDataset test_;
    PartitionPlan plan_;
    std::vector<LabeledDataset> fake_data_;
    LabeledDataset stolen_;  // adaptive-stolen AGR only
    ParameterVector global_;
    ParameterVector mpaf_base_;
};

RunResult run_single(const ExperimentConfig& cfg, std::uint64_t seed);

// Attacked run paired with a clean baseline (same seeds, attack = none,
// compromised clients restored to benign, fake clients removed).
ExperimentReport run_experiment(const ExperimentConfig& cfg, std::uint64_t seed);

SweepReport run_seed_sweep(const ExperimentConfig& cfg);

ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json_string(const std::string& text);
std::string config_to_json_string(const ExperimentConfig& cfg);

std::string summary_json(const ExperimentReport& report);
std::string summary_json(const SweepReport& report);
void write_rounds_csv(const std::vector<RoundRecord>& rounds, const std::string& path);
void emit_report(const ExperimentReport& report, const std::string& out_dir);
void emit_report(const SweepReport& report, const std::string& out_dir);

}  // namespace flspec
