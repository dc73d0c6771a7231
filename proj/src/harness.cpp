#include "flspec/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "flspec/rng.hpp"

namespace flspec {

using nlohmann::json;

void ExperimentConfig::validate() const {
    task.validate();
    model.validate();
    train.validate();
    if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    if (clients_per_round < 1) throw std::invalid_argument("clients_per_round must be >= 1");
    if (adversary.n_benign < 0 || adversary.n_compromised < 0 || adversary.n_fake < 0) {
        throw std::invalid_argument("client counts must be >= 0");
    }
    if (clients_per_round > adversary.total()) {
        throw std::invalid_argument("clients_per_round exceeds client population");
    }
    if (dirichlet_beta <= 0) throw std::invalid_argument("dirichlet_beta must be > 0");
    if (seeds.empty()) throw std::invalid_argument("seeds must be non-empty");
    if (model.input_dim != task.input_dim || model.num_classes != task.num_classes) {
        throw std::invalid_argument("model dimensions must match the task");
    }
    if (adversary.attack.kind != AttackKind::None &&
        adversary.n_compromised + adversary.n_fake == 0) {
        throw std::invalid_argument("attack configured but no malicious clients");
    }
    if (adversary.attack.kind == AttackKind::DynOpt) {
        adversary.attack.gamma_search.validate();
        if (adversary.n_fake > 0 && adversary.n_compromised == 0) {
            throw std::invalid_argument(
                "dyn-opt with fake clients needs compromised clients to synthesize data from");
        }
        if (adversary.n_fake == 0 && adversary.n_compromised < 2 &&
            adversary.attack.perturbation == PerturbKind::InverseStd) {
            throw std::invalid_argument("inverse-std needs at least 2 reference clients");
        }
    }
    if ((aggregator.kind == AggKind::NormBounding || aggregator.kind == AggKind::AdaptiveStolen) &&
        aggregator.tau <= 0) {
        throw std::invalid_argument("tau must be > 0");
    }
    if (aggregator.kind == AggKind::AdaptiveStolen && adversary.n_compromised == 0) {
        throw std::invalid_argument("adaptive-stolen needs compromised clients (stolen data)");
    }
    if (samples_per_label < 1) throw std::invalid_argument("samples_per_label must be >= 1");
    if (reference_clients < 1) throw std::invalid_argument("reference_clients must be >= 1");
}

FlSimulation::FlSimulation(const ExperimentConfig& cfg, std::uint64_t master_seed)
    : cfg_(cfg), seed_(master_seed) {
    cfg_.validate();

    auto [train, test] = generate_synthetic_task(cfg_.task, derive_seed(seed_, "task"));
    train_ = std::move(train);
    test_ = std::move(test);

    const int n_real = cfg_.adversary.n_benign + cfg_.adversary.n_compromised;
    if (n_real > 0) {
        plan_ = partition_dirichlet(train_, n_real, cfg_.dirichlet_beta,
                                    derive_seed(seed_, "partition"));
    }

    global_ = init_model(cfg_.model, derive_seed(seed_, "init"));

    const auto& attack = cfg_.adversary.attack;
    if (attack.kind == AttackKind::FakeMpaf) {
        mpaf_base_ = init_model(cfg_.model, derive_seed(seed_, "mpaf_base"));
    }

    // Hybrid pipeline: collect compromised data, fit the synthesizer, build the
    // fake pool and spread it non-iid over the fake clients.
    if (attack.kind == AttackKind::DynOpt && cfg_.adversary.n_fake > 0) {
        std::vector<int> compromised_ids(cfg_.adversary.n_compromised);
        std::iota(compromised_ids.begin(), compromised_ids.end(), 0);
        PerLabelSamples sets = collect_compromised_data(plan_, train_, compromised_ids);
        std::unique_ptr<Synthesizer> synth;
        if (cfg_.synthesizer == SynthKind::Gaussian) {
            synth = std::make_unique<GaussianSynthesizer>(cfg_.synth);
        } else {
            synth = std::make_unique<ReplaySynthesizer>();
        }
        synth->fit(sets);
        LabeledDataset pool = generate_fake_pool(*synth, cfg_.adversary.n_fake,
                                                 cfg_.samples_per_label,
                                                 derive_seed(seed_, "fake_pool"));
        fake_data_ = assign_fake_data(pool, cfg_.adversary.n_fake, cfg_.dirichlet_beta,
                                      derive_seed(seed_, "fake_partition"));
    }

    if (cfg_.aggregator.kind == AggKind::AdaptiveStolen) {
        std::vector<int> compromised_ids(cfg_.adversary.n_compromised);
        std::iota(compromised_ids.begin(), compromised_ids.end(), 0);
        std::vector<int> all;
        for (int id : compromised_ids) {
            all.insert(all.end(), plan_.assignments[id].begin(), plan_.assignments[id].end());
        }
        stolen_ = dataset_subset(train_, all);
        if (stolen_.empty()) throw std::invalid_argument("stolen dataset is empty");
    }
}

ClientRole FlSimulation::role_of(int client_id) const {
    if (client_id < cfg_.adversary.n_compromised) return ClientRole::Compromised;
    if (client_id < cfg_.adversary.n_compromised + cfg_.adversary.n_benign) {
        return ClientRole::Benign;
    }
    return ClientRole::Fake;
}

LabeledDataset FlSimulation::client_dataset(int client_id) const {
    const int n_real = cfg_.adversary.n_benign + cfg_.adversary.n_compromised;
    if (client_id < n_real) return dataset_subset(train_, plan_.assignments[client_id]);
    const int fake_index = client_id - n_real;
    if (fake_index < static_cast<int>(fake_data_.size())) return fake_data_[fake_index];
    return {};
}

std::vector<ClientUpdate> FlSimulation::draft_references(int round_index) {
    const auto& adv = cfg_.adversary;
    const int n_real = adv.n_benign + adv.n_compromised;
    std::vector<ClientUpdate> refs;

    auto train_ref = [&](int client_id) {
        LabeledDataset data = client_dataset(client_id);
        if (data.empty()) {
            refs.push_back({client_id, role_of(client_id),
                            ParameterVector(global_.size(), 0.0)});
            return;
        }
        refs.push_back(local_train(cfg_.model, global_, data, cfg_.train,
                                   derive_seed(seed_, "train", round_index, client_id),
                                   client_id, role_of(client_id)));
    };

    if (adv.n_fake > 0) {
        // "chooses 25 random fake clients for its optimization"
        std::vector<int> fake_ids(adv.n_fake);
        std::iota(fake_ids.begin(), fake_ids.end(), n_real);
        auto rng = make_rng(seed_, "ref_select", round_index);
        std::shuffle(fake_ids.begin(), fake_ids.end(), rng);
        const int take = std::min(cfg_.reference_clients, adv.n_fake);
        for (int i = 0; i < take; ++i) train_ref(fake_ids[i]);
        if (adv.attack.use_compromised_refs) {
            for (int id = 0; id < adv.n_compromised; ++id) train_ref(id);
        }
    } else {
        std::vector<int> comp_ids(adv.n_compromised);
        std::iota(comp_ids.begin(), comp_ids.end(), 0);
        auto rng = make_rng(seed_, "ref_select", round_index);
        std::shuffle(comp_ids.begin(), comp_ids.end(), rng);
        const int take = std::min(cfg_.reference_clients, adv.n_compromised);
        for (int i = 0; i < take; ++i) train_ref(comp_ids[i]);
    }
    return refs;
}

ParameterVector FlSimulation::craft_malicious(int round_index, int m_round,
                                              const std::vector<ClientUpdate>& /*unused*/) {
    const auto& attack = cfg_.adversary.attack;
    if (attack.kind == AttackKind::FakeMpaf) {
        return craft_mpaf(global_, {mpaf_base_, attack.lambda});
    }

    std::vector<ClientUpdate> refs = draft_references(round_index);
    if (refs.empty()) return ParameterVector(global_.size(), 0.0);

    PerturbKind pk = attack.perturbation;
    if (pk == PerturbKind::InverseStd && refs.size() < 2) pk = PerturbKind::InverseUnit;

    switch (cfg_.aggregator.kind) {
        case AggKind::FedAvg:
            return dyn_opt_fedavg(refs, derive_seed(seed_, "attack", round_index),
                                  attack.fixed_gamma_fedavg);
        case AggKind::MultiKrum: {
            ParameterVector omega = perturbation_direction(pk, refs);
            return dyn_opt_multikrum(refs, omega, cfg_.clients_per_round, m_round,
                                     attack.gamma_search)
                .update;
        }
        case AggKind::TrimmedMean:
        case AggKind::Median: {
            ParameterVector omega = perturbation_direction(pk, refs);
            return dyn_opt_trimmed_median(refs, omega, cfg_.aggregator.kind,
                                          cfg_.clients_per_round, m_round, attack.gamma_search)
                .update;
        }
        case AggKind::NormBounding:
        case AggKind::AdaptiveStolen: {
            ParameterVector omega = perturbation_direction(pk, refs);
            return dyn_opt_norm_bounding(refs, omega, cfg_.aggregator.tau,
                                         attack.fixed_gamma_norm_bounding);
        }
    }
    return ParameterVector(global_.size(), 0.0);
}

ParameterVector FlSimulation::aggregate(std::vector<ClientUpdate>& updates, int m_round) {
    const int n = static_cast<int>(updates.size());
    switch (cfg_.aggregator.kind) {
        case AggKind::FedAvg:
            return agg_fedavg(updates);
        case AggKind::Median:
            return agg_median(updates);
        case AggKind::TrimmedMean:
            return agg_trimmed_mean(updates, std::min(m_round, (n - 1) / 2));
        case AggKind::MultiKrum:
            return agg_multi_krum(updates, std::min(m_round, std::max(0, (n - 4) / 2)));
        case AggKind::NormBounding:
            return agg_norm_bounding(updates, cfg_.aggregator.tau);
        case AggKind::AdaptiveStolen:
            return agg_adaptive_stolen(updates, global_, stolen_, test_, cfg_.aggregator.tau,
                                       cfg_.model, cfg_.aggregator.literal_stolen_weights);
    }
    return agg_fedavg(updates);
}

RoundRecord FlSimulation::run_round(int round_index) {
    const auto& adv = cfg_.adversary;
    const int total = adv.total();
    const bool attacking = adv.attack.kind != AttackKind::None;

    std::vector<int> population(total);
    std::iota(population.begin(), population.end(), 0);
    std::vector<int> selected;
    selected.reserve(cfg_.clients_per_round);
    {
        auto rng = make_rng(seed_, "select", round_index);
        std::sample(population.begin(), population.end(), std::back_inserter(selected),
                    cfg_.clients_per_round, rng);
    }
    std::sort(selected.begin(), selected.end());

    std::vector<int> malicious_selected;
    std::vector<ClientUpdate> updates;
    std::vector<ClientUpdate> compromised_updates;
    double benign_norm_sum = 0;
    int benign_count = 0;

    for (int id : selected) {
        ClientRole role = role_of(id);
        const bool is_malicious = attacking && role != ClientRole::Benign;
        if (is_malicious) {
            malicious_selected.push_back(id);
            continue;
        }
        LabeledDataset data = client_dataset(id);
        ClientUpdate upd;
        if (data.empty()) {
            upd = {id, role, ParameterVector(global_.size(), 0.0)};
        } else {
            upd = local_train(cfg_.model, global_, data, cfg_.train,
                              derive_seed(seed_, "train", round_index, id), id, role);
        }
        benign_norm_sum += l2_norm(upd.delta);
        ++benign_count;
        updates.push_back(std::move(upd));
    }

    const int m_round = static_cast<int>(malicious_selected.size());
    double malicious_norm = 0;
    if (m_round > 0) {
        ParameterVector crafted = craft_malicious(round_index, m_round, compromised_updates);
        malicious_norm = l2_norm(crafted);
        for (int id : malicious_selected) {
            updates.push_back({id, role_of(id), crafted});
        }
    }
    std::sort(updates.begin(), updates.end(),
              [](const ClientUpdate& a, const ClientUpdate& b) { return a.client_id < b.client_id; });

    ParameterVector agg = aggregate(updates, m_round);
    global_ = apply_update(global_, agg);

    auto [loss, acc] = evaluate(cfg_.model, global_, test_);
    RoundRecord rec;
    rec.round = round_index;
    rec.test_accuracy = acc;
    rec.test_loss = loss;
    rec.n_malicious_selected = m_round;
    rec.aggregate_norm = l2_norm(agg);
    rec.mean_benign_update_norm = benign_count > 0 ? benign_norm_sum / benign_count : 0.0;
    rec.mean_malicious_update_norm = malicious_norm;
    return rec;
}

RunResult FlSimulation::run_all() {
    RunResult res;
    res.per_round.reserve(cfg_.rounds);
    for (int t = 0; t < cfg_.rounds; ++t) {
        res.per_round.push_back(run_round(t));
        res.max_test_accuracy = std::max(res.max_test_accuracy,
                                         res.per_round.back().test_accuracy);
    }
    return res;
}

RunResult run_single(const ExperimentConfig& cfg, std::uint64_t seed) {
    FlSimulation sim(cfg, seed);
    return sim.run_all();
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, std::uint64_t seed) {
    ExperimentReport report;
    report.seed = seed;

    RunResult attacked = run_single(cfg, seed);
    report.per_round = std::move(attacked.per_round);
    report.max_test_accuracy = attacked.max_test_accuracy;

    if (cfg.adversary.attack.kind == AttackKind::None) {
        report.clean_max_test_accuracy = report.max_test_accuracy;
        report.attack_impact = 0.0;
        report.attack_cost = 0.0;
        return report;
    }

    ExperimentConfig clean = cfg;
    clean.adversary.n_benign = cfg.adversary.n_benign + cfg.adversary.n_compromised;
    clean.adversary.n_compromised = 0;
    clean.adversary.n_fake = 0;
    clean.adversary.attack = AttackConfig{};
    if (clean.aggregator.kind == AggKind::AdaptiveStolen) {
        clean.aggregator.kind = AggKind::NormBounding;  // no stolen data without an adversary
    }
    RunResult baseline = run_single(clean, seed);
    report.clean_max_test_accuracy = baseline.max_test_accuracy;
    report.attack_impact = report.clean_max_test_accuracy - report.max_test_accuracy;

    AdversaryCounts counts{cfg.adversary.n_benign, cfg.adversary.n_compromised,
                           cfg.adversary.n_fake};
    report.attack_cost = attack_cost(counts, cfg.cost);
    return report;
}

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double s = 0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / (v.size() - 1));
}

}  // namespace

SweepReport run_seed_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    SweepReport sweep;
    std::vector<double> accs, impacts;
    for (std::uint64_t seed : cfg.seeds) {
        sweep.per_seed.push_back(run_experiment(cfg, seed));
        accs.push_back(sweep.per_seed.back().max_test_accuracy);
        impacts.push_back(sweep.per_seed.back().attack_impact);
    }
    sweep.median_max_accuracy = median_of(accs);
    sweep.std_max_accuracy = sample_std(accs);
    sweep.median_attack_impact = median_of(impacts);
    sweep.std_attack_impact = sample_std(impacts);
    sweep.attack_cost = sweep.per_seed.front().attack_cost;
    return sweep;
}

// ---------------------------------------------------------------------------
// Config I/O
// ---------------------------------------------------------------------------

namespace {

const json& require(const json& j, const char* key) {
    if (!j.contains(key)) throw std::runtime_error(std::string("missing field: ") + key);
    return j.at(key);
}

ModelKind parse_model_kind(const std::string& s) {
    if (s == "logistic-regression") return ModelKind::LogisticRegression;
    if (s == "one-hidden-layer-mlp") return ModelKind::Mlp;
    throw std::runtime_error("invalid field: model.kind");
}

AggKind parse_agg_kind(const std::string& s) {
    if (s == "fedavg") return AggKind::FedAvg;
    if (s == "median") return AggKind::Median;
    if (s == "trimmed-mean") return AggKind::TrimmedMean;
    if (s == "multi-krum") return AggKind::MultiKrum;
    if (s == "norm-bounding") return AggKind::NormBounding;
    if (s == "adaptive-stolen") return AggKind::AdaptiveStolen;
    throw std::runtime_error("invalid field: aggregator.kind");
}

AttackKind parse_attack_kind(const std::string& s) {
    if (s == "none") return AttackKind::None;
    if (s == "fake-mpaf") return AttackKind::FakeMpaf;
    if (s == "dyn-opt") return AttackKind::DynOpt;
    throw std::runtime_error("invalid field: adversary.attack.kind");
}

PerturbKind parse_perturb_kind(const std::string& s) {
    if (s == "inverse-unit") return PerturbKind::InverseUnit;
    if (s == "inverse-sign") return PerturbKind::InverseSign;
    if (s == "inverse-std") return PerturbKind::InverseStd;
    throw std::runtime_error("invalid field: adversary.attack.perturbation");
}

std::string agg_kind_name(AggKind k) {
    switch (k) {
        case AggKind::FedAvg: return "fedavg";
        case AggKind::Median: return "median";
        case AggKind::TrimmedMean: return "trimmed-mean";
        case AggKind::MultiKrum: return "multi-krum";
        case AggKind::NormBounding: return "norm-bounding";
        case AggKind::AdaptiveStolen: return "adaptive-stolen";
    }
    return "fedavg";
}

std::string attack_kind_name(AttackKind k) {
    switch (k) {
        case AttackKind::None: return "none";
        case AttackKind::FakeMpaf: return "fake-mpaf";
        case AttackKind::DynOpt: return "dyn-opt";
    }
    return "none";
}

std::string perturb_kind_name(PerturbKind k) {
    switch (k) {
        case PerturbKind::InverseUnit: return "inverse-unit";
        case PerturbKind::InverseSign: return "inverse-sign";
        case PerturbKind::InverseStd: return "inverse-std";
    }
    return "inverse-std";
}

}  // namespace

ExperimentConfig config_from_json_string(const std::string& text) {
    json j = json::parse(text);
    ExperimentConfig cfg;

    const json& task = require(j, "task");
    cfg.task.num_classes = require(task, "num_classes").get<int>();
    cfg.task.input_dim = require(task, "input_dim").get<int>();
    cfg.task.samples_per_class_train = require(task, "samples_per_class_train").get<int>();
    cfg.task.samples_per_class_test = require(task, "samples_per_class_test").get<int>();
    cfg.task.class_center_scale = task.value("class_center_scale", 1.0);
    cfg.task.noise_sigma = task.value("noise_sigma", 1.0);

    const json& model = require(j, "model");
    cfg.model.kind = parse_model_kind(require(model, "kind").get<std::string>());
    cfg.model.input_dim = model.value("input_dim", cfg.task.input_dim);
    cfg.model.num_classes = model.value("num_classes", cfg.task.num_classes);
    cfg.model.hidden_units = model.value("hidden_units", 0);

    const json& train = require(j, "train");
    cfg.train.local_epochs = train.value("local_epochs", 1);
    cfg.train.learning_rate = require(train, "learning_rate").get<double>();
    cfg.train.momentum = train.value("momentum", 0.0);
    cfg.train.weight_decay = train.value("weight_decay", 0.0);
    cfg.train.batch_size = train.value("batch_size", 1);

    cfg.rounds = require(j, "rounds").get<int>();
    cfg.clients_per_round = j.value("clients_per_round", 25);
    cfg.dirichlet_beta = j.value("dirichlet_beta", 0.5);

    const json& adv = require(j, "adversary");
    cfg.adversary.n_benign = require(adv, "n_benign").get<int>();
    cfg.adversary.n_compromised = adv.value("n_compromised", 0);
    cfg.adversary.n_fake = adv.value("n_fake", 0);
    if (adv.contains("attack")) {
        const json& att = adv.at("attack");
        cfg.adversary.attack.kind = parse_attack_kind(require(att, "kind").get<std::string>());
        cfg.adversary.attack.lambda = att.value("lambda", 1e6);
        if (att.contains("perturbation")) {
            cfg.adversary.attack.perturbation =
                parse_perturb_kind(att.at("perturbation").get<std::string>());
        }
        cfg.adversary.attack.fixed_gamma_fedavg = att.value("fixed_gamma_fedavg", 1e6);
        cfg.adversary.attack.fixed_gamma_norm_bounding =
            att.value("fixed_gamma_norm_bounding", 10.0);
        cfg.adversary.attack.use_compromised_refs = att.value("use_compromised_refs", false);
        if (att.contains("gamma_search")) {
            const json& gs = att.at("gamma_search");
            cfg.adversary.attack.gamma_search.gamma_init = gs.value("gamma_init", 10.0);
            cfg.adversary.attack.gamma_search.rel_precision = gs.value("rel_precision", 1e-3);
            cfg.adversary.attack.gamma_search.grid_points = gs.value("grid_points", 50);
            cfg.adversary.attack.gamma_search.gamma_lo = gs.value("gamma_lo", 1e-2);
            cfg.adversary.attack.gamma_search.gamma_hi = gs.value("gamma_hi", 1e2);
        }
    }

    const json& agg = require(j, "aggregator");
    cfg.aggregator.kind = parse_agg_kind(require(agg, "kind").get<std::string>());
    cfg.aggregator.tau = agg.value("tau", 1.0);
    cfg.aggregator.literal_stolen_weights = agg.value("literal_stolen_weights", false);

    cfg.seeds = require(j, "seeds").get<std::vector<std::uint64_t>>();

    if (j.contains("synthesizer")) {
        const json& syn = j.at("synthesizer");
        std::string kind = syn.value("kind", "gaussian");
        if (kind == "gaussian") {
            cfg.synthesizer = SynthKind::Gaussian;
        } else if (kind == "replay") {
            cfg.synthesizer = SynthKind::Replay;
        } else {
            throw std::runtime_error("invalid field: synthesizer.kind");
        }
        std::string cov = syn.value("covariance_mode", "diagonal");
        if (cov == "diagonal") {
            cfg.synth.covariance_mode = CovarianceMode::Diagonal;
        } else if (cov == "spherical") {
            cfg.synth.covariance_mode = CovarianceMode::Spherical;
        } else {
            throw std::runtime_error("invalid field: synthesizer.covariance_mode");
        }
        cfg.synth.variance_floor = syn.value("variance_floor", 1e-3);
    }
    cfg.samples_per_label = j.value("samples_per_label", 5);
    cfg.reference_clients = j.value("reference_clients", 25);

    if (j.contains("cost")) {
        const json& c = j.at("cost");
        std::string mode = c.value("mode", "botnet");
        if (mode == "botnet") {
            cfg.cost.mode = CostMode::Botnet;
        } else if (mode == "unit") {
            cfg.cost.mode = CostMode::UnitCosts;
        } else {
            throw std::runtime_error("invalid field: cost.mode");
        }
        cfg.cost.device_price = c.value("device_price", 1.0);
        cfg.cost.app_prevalence = c.value("app_prevalence", 0.01);
        cfg.cost.fake_unit_cost = c.value("fake_unit_cost", 1.0);
        cfg.cost.compromised_unit_cost = c.value("compromised_unit_cost", 100.0);
    }

    cfg.validate();
    return cfg;
}

std::string config_to_json_string(const ExperimentConfig& cfg) {
    json j;
    j["task"] = {{"num_classes", cfg.task.num_classes},
                 {"input_dim", cfg.task.input_dim},
                 {"samples_per_class_train", cfg.task.samples_per_class_train},
                 {"samples_per_class_test", cfg.task.samples_per_class_test},
                 {"class_center_scale", cfg.task.class_center_scale},
                 {"noise_sigma", cfg.task.noise_sigma}};
    j["model"] = {{"kind", cfg.model.kind == ModelKind::LogisticRegression
                               ? "logistic-regression"
                               : "one-hidden-layer-mlp"},
                  {"input_dim", cfg.model.input_dim},
                  {"num_classes", cfg.model.num_classes},
                  {"hidden_units", cfg.model.hidden_units}};
    j["train"] = {{"local_epochs", cfg.train.local_epochs},
                  {"learning_rate", cfg.train.learning_rate},
                  {"momentum", cfg.train.momentum},
                  {"weight_decay", cfg.train.weight_decay},
                  {"batch_size", cfg.train.batch_size}};
    j["rounds"] = cfg.rounds;
    j["clients_per_round"] = cfg.clients_per_round;
    j["dirichlet_beta"] = cfg.dirichlet_beta;
    j["adversary"] = {
        {"n_benign", cfg.adversary.n_benign},
        {"n_compromised", cfg.adversary.n_compromised},
        {"n_fake", cfg.adversary.n_fake},
        {"attack",
         {{"kind", attack_kind_name(cfg.adversary.attack.kind)},
          {"lambda", cfg.adversary.attack.lambda},
          {"perturbation", perturb_kind_name(cfg.adversary.attack.perturbation)},
          {"fixed_gamma_fedavg", cfg.adversary.attack.fixed_gamma_fedavg},
          {"fixed_gamma_norm_bounding", cfg.adversary.attack.fixed_gamma_norm_bounding},
          {"use_compromised_refs", cfg.adversary.attack.use_compromised_refs},
          {"gamma_search",
           {{"gamma_init", cfg.adversary.attack.gamma_search.gamma_init},
            {"rel_precision", cfg.adversary.attack.gamma_search.rel_precision},
            {"grid_points", cfg.adversary.attack.gamma_search.grid_points},
            {"gamma_lo", cfg.adversary.attack.gamma_search.gamma_lo},
            {"gamma_hi", cfg.adversary.attack.gamma_search.gamma_hi}}}}}};
    j["aggregator"] = {{"kind", agg_kind_name(cfg.aggregator.kind)},
                       {"tau", cfg.aggregator.tau},
                       {"literal_stolen_weights", cfg.aggregator.literal_stolen_weights}};
    j["seeds"] = cfg.seeds;
    j["synthesizer"] = {
        {"kind", cfg.synthesizer == SynthKind::Gaussian ? "gaussian" : "replay"},
        {"covariance_mode",
         cfg.synth.covariance_mode == CovarianceMode::Diagonal ? "diagonal" : "spherical"},
        {"variance_floor", cfg.synth.variance_floor}};
    j["samples_per_label"] = cfg.samples_per_label;
    j["reference_clients"] = cfg.reference_clients;
    j["cost"] = {{"mode", cfg.cost.mode == CostMode::Botnet ? "botnet" : "unit"},
                 {"device_price", cfg.cost.device_price},
                 {"app_prevalence", cfg.cost.app_prevalence},
                 {"fake_unit_cost", cfg.cost.fake_unit_cost},
                 {"compromised_unit_cost", cfg.cost.compromised_unit_cost}};
    return j.dump(2);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return config_from_json_string(ss.str());
}

namespace {

json report_json(const ExperimentReport& r) {
    return json{{"seed", r.seed},
                {"max_test_accuracy", r.max_test_accuracy},
                {"clean_max_test_accuracy", r.clean_max_test_accuracy},
                {"attack_impact", r.attack_impact},
                {"attack_cost", r.attack_cost}};
}

}  // namespace

std::string summary_json(const ExperimentReport& report) {
    return report_json(report).dump(2);
}

std::string summary_json(const SweepReport& report) {
    json j;
    j["per_seed"] = json::array();
    for (const auto& r : report.per_seed) j["per_seed"].push_back(report_json(r));
    j["median_max_accuracy"] = report.median_max_accuracy;
    j["std_max_accuracy"] = report.std_max_accuracy;
    j["median_attack_impact"] = report.median_attack_impact;
    j["std_attack_impact"] = report.std_attack_impact;
    j["attack_cost"] = report.attack_cost;
    return j.dump(2);
}

void write_rounds_csv(const std::vector<RoundRecord>& rounds, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for write: " + path);
    f << "round,test_accuracy,test_loss,n_malicious_selected,aggregate_norm,"
         "mean_benign_norm,mean_malicious_norm\n";
    f.precision(17);
    for (const auto& r : rounds) {
        f << r.round << "," << r.test_accuracy << "," << r.test_loss << ","
          << r.n_malicious_selected << "," << r.aggregate_norm << ","
          << r.mean_benign_update_norm << "," << r.mean_malicious_update_norm << "\n";
    }
}

void emit_report(const ExperimentReport& report, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_rounds_csv(report.per_round, out_dir + "/rounds.csv");
    std::ofstream f(out_dir + "/summary.json");
    f << summary_json(report) << "\n";
}

void emit_report(const SweepReport& report, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    for (const auto& r : report.per_seed) {
        write_rounds_csv(r.per_round, out_dir + "/rounds_seed" + std::to_string(r.seed) + ".csv");
    }
    std::ofstream f(out_dir + "/summary.json");
    f << summary_json(report) << "\n";
}

}  // namespace flspec
