#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace flspec {

// Flat vector of model parameters. Also used for client updates (deltas),
// perturbation directions and crafted malicious updates.
using ParameterVector = std::vector<double>;

enum class ModelKind { LogisticRegression, Mlp };

struct ModelSpec {
    ModelKind kind = ModelKind::LogisticRegression;
    int input_dim = 1;
    int num_classes = 2;
    int hidden_units = 0;  // mlp only

    int param_dim() const;
    void validate() const;
};

struct TrainConfig {
    int local_epochs = 1;
    double learning_rate = 0.1;
    double momentum = 0.0;
    double weight_decay = 0.0;
    int batch_size = 1;

    void validate() const;
};

enum class ClientRole { Benign, Compromised, Fake };

struct ClientUpdate {
    int client_id = 0;
    ClientRole role = ClientRole::Benign;
    ParameterVector delta;
};

struct LabeledDataset {
    std::vector<std::vector<double>> features;
    std::vector<int> labels;
    int num_classes = 0;

    std::size_t size() const { return labels.size(); }
    bool empty() const { return labels.empty(); }
    int input_dim() const { return features.empty() ? 0 : static_cast<int>(features[0].size()); }
};

double l2_norm(const ParameterVector& v);

// theta^{t+1} = theta^t + aggregate
ParameterVector apply_update(const ParameterVector& global, const ParameterVector& aggregate);

// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) per layer, deterministic per (spec, seed).
ParameterVector init_model(const ModelSpec& spec, std::uint64_t seed);

// Class scores for one sample.
std::vector<double> forward_logits(const ModelSpec& spec, const ParameterVector& params,
                                   const std::vector<double>& x);

// Softmax cross-entropy of one sample, and analytic gradient accumulation.
double sample_loss(const ModelSpec& spec, const ParameterVector& params,
                   const std::vector<double>& x, int label);
void accumulate_gradient(const ModelSpec& spec, const ParameterVector& params,
                         const std::vector<double>& x, int label, ParameterVector& grad);

// Minibatch SGD with classical momentum and L2 weight decay. Mutates params and
// velocity in place; epoch shuffling is seeded per (seed, epoch index) so a
// multi-epoch run equals chained single-epoch runs carrying the velocity.
void run_sgd(const ModelSpec& spec, ParameterVector& params, ParameterVector& velocity,
             const LabeledDataset& data, const TrainConfig& cfg, std::uint64_t seed,
             int first_epoch, int n_epochs);

// delta = theta_local - global after cfg.local_epochs epochs.
ClientUpdate local_train(const ModelSpec& spec, const ParameterVector& global,
                         const LabeledDataset& data, const TrainConfig& cfg,
                         std::uint64_t seed, int client_id = 0,
                         ClientRole role = ClientRole::Benign);

// (mean cross-entropy loss, top-1 accuracy)
std::pair<double, double> evaluate(const ModelSpec& spec, const ParameterVector& params,
                                   const LabeledDataset& data);

}  // namespace flspec
