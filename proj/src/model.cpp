#include "flspec/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "flspec/rng.hpp"

namespace flspec {

int ModelSpec::param_dim() const {
    if (kind == ModelKind::LogisticRegression) {
        return input_dim * num_classes + num_classes;
    }
    return input_dim * hidden_units + hidden_units + hidden_units * num_classes + num_classes;
}

void ModelSpec::validate() const {
    if (input_dim < 1) throw std::invalid_argument("input_dim must be >= 1");
    if (num_classes < 2) throw std::invalid_argument("num_classes must be >= 2");
    if (kind == ModelKind::Mlp && hidden_units < 1) {
        throw std::invalid_argument("hidden_units must be >= 1 for mlp");
    }
}

void TrainConfig::validate() const {
    if (local_epochs < 1) throw std::invalid_argument("local_epochs must be >= 1");
    if (learning_rate <= 0) throw std::invalid_argument("learning_rate must be > 0");
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (momentum < 0 || momentum >= 1) throw std::invalid_argument("momentum must be in [0,1)");
    if (weight_decay < 0) throw std::invalid_argument("weight_decay must be >= 0");
}

double l2_norm(const ParameterVector& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

ParameterVector apply_update(const ParameterVector& global, const ParameterVector& aggregate) {
    if (global.size() != aggregate.size()) {
        throw std::invalid_argument("apply_update: dimension mismatch");
    }
    ParameterVector out(global.size());
    for (std::size_t i = 0; i < global.size(); ++i) out[i] = global[i] + aggregate[i];
    return out;
}

ParameterVector init_model(const ModelSpec& spec, std::uint64_t seed) {
    spec.validate();
    auto rng = make_rng(seed, "init_model");
    ParameterVector params(spec.param_dim());

    auto fill_layer = [&](std::size_t offset, std::size_t count, int fan_in) {
        double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (std::size_t i = 0; i < count; ++i) params[offset + i] = dist(rng);
    };

    if (spec.kind == ModelKind::LogisticRegression) {
        std::size_t w = static_cast<std::size_t>(spec.input_dim) * spec.num_classes;
        fill_layer(0, w + spec.num_classes, spec.input_dim);
    } else {
        std::size_t w1 = static_cast<std::size_t>(spec.input_dim) * spec.hidden_units;
        std::size_t w2 = static_cast<std::size_t>(spec.hidden_units) * spec.num_classes;
        fill_layer(0, w1 + spec.hidden_units, spec.input_dim);
        fill_layer(w1 + spec.hidden_units, w2 + spec.num_classes, spec.hidden_units);
    }
    return params;
}

namespace {

// Parameter layout:
//   logreg: W [C x D] row-major, b [C]
//   mlp:    W1 [H x D], b1 [H], W2 [C x H], b2 [C]

void mlp_hidden(const ModelSpec& s, const ParameterVector& p, const std::vector<double>& x,
                std::vector<double>& pre, std::vector<double>& act) {
    const int D = s.input_dim, H = s.hidden_units;
    pre.assign(H, 0.0);
    act.assign(H, 0.0);
    for (int h = 0; h < H; ++h) {
        double z = p[static_cast<std::size_t>(H) * D + h];  // b1[h]
        const double* row = &p[static_cast<std::size_t>(h) * D];
        for (int j = 0; j < D; ++j) z += row[j] * x[j];
        pre[h] = z;
        act[h] = z > 0 ? z : 0.0;  // ReLU
    }
}

std::vector<double> softmax_probs(const std::vector<double>& logits) {
    double mx = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double sum = 0;
    for (std::size_t k = 0; k < logits.size(); ++k) {
        p[k] = std::exp(logits[k] - mx);
        sum += p[k];
    }
    for (double& v : p) v /= sum;
    return p;
}

double log_sum_exp(const std::vector<double>& logits) {
    double mx = *std::max_element(logits.begin(), logits.end());
    double sum = 0;
    for (double v : logits) sum += std::exp(v - mx);
    return mx + std::log(sum);
}

}  // namespace

std::vector<double> forward_logits(const ModelSpec& spec, const ParameterVector& params,
                                   const std::vector<double>& x) {
    const int C = spec.num_classes;
    std::vector<double> logits(C, 0.0);
    if (spec.kind == ModelKind::LogisticRegression) {
        const int D = spec.input_dim;
        for (int k = 0; k < C; ++k) {
            double z = params[static_cast<std::size_t>(C) * D + k];  // b[k]
            const double* row = &params[static_cast<std::size_t>(k) * D];
            for (int j = 0; j < D; ++j) z += row[j] * x[j];
            logits[k] = z;
        }
    } else {
        const int D = spec.input_dim, H = spec.hidden_units;
        std::vector<double> pre, act;
        mlp_hidden(spec, params, x, pre, act);
        const std::size_t off2 = static_cast<std::size_t>(H) * D + H;
        for (int k = 0; k < C; ++k) {
            double z = params[off2 + static_cast<std::size_t>(C) * H + k];  // b2[k]
            const double* row = &params[off2 + static_cast<std::size_t>(k) * H];
            for (int h = 0; h < H; ++h) z += row[h] * act[h];
            logits[k] = z;
        }
    }
    return logits;
}

double sample_loss(const ModelSpec& spec, const ParameterVector& params,
                   const std::vector<double>& x, int label) {
    auto logits = forward_logits(spec, params, x);
    return log_sum_exp(logits) - logits[label];
}

void accumulate_gradient(const ModelSpec& spec, const ParameterVector& params,
                         const std::vector<double>& x, int label, ParameterVector& grad) {
    const int C = spec.num_classes;
    auto logits = forward_logits(spec, params, x);
    auto probs = softmax_probs(logits);
    std::vector<double> dlogits = probs;
    dlogits[label] -= 1.0;

    if (spec.kind == ModelKind::LogisticRegression) {
        const int D = spec.input_dim;
        for (int k = 0; k < C; ++k) {
            double* row = &grad[static_cast<std::size_t>(k) * D];
            for (int j = 0; j < D; ++j) row[j] += dlogits[k] * x[j];
            grad[static_cast<std::size_t>(C) * D + k] += dlogits[k];
        }
    } else {
        const int D = spec.input_dim, H = spec.hidden_units;
        std::vector<double> pre, act;
        mlp_hidden(spec, params, x, pre, act);
        const std::size_t off2 = static_cast<std::size_t>(H) * D + H;

        std::vector<double> dact(H, 0.0);
        for (int k = 0; k < C; ++k) {
            const double* w2row = &params[off2 + static_cast<std::size_t>(k) * H];
            double* g2row = &grad[off2 + static_cast<std::size_t>(k) * H];
            for (int h = 0; h < H; ++h) {
                g2row[h] += dlogits[k] * act[h];
                dact[h] += dlogits[k] * w2row[h];
            }
            grad[off2 + static_cast<std::size_t>(C) * H + k] += dlogits[k];
        }
        for (int h = 0; h < H; ++h) {
            if (pre[h] <= 0) continue;
            double* g1row = &grad[static_cast<std::size_t>(h) * D];
            for (int j = 0; j < D; ++j) g1row[j] += dact[h] * x[j];
            grad[static_cast<std::size_t>(H) * D + h] += dact[h];
        }
    }
}

void run_sgd(const ModelSpec& spec, ParameterVector& params, ParameterVector& velocity,
             const LabeledDataset& data, const TrainConfig& cfg, std::uint64_t seed,
             int first_epoch, int n_epochs) {
    if (data.empty()) throw std::invalid_argument("empty client dataset");
    const std::size_t n = data.size();
    const std::size_t d = params.size();
    ParameterVector grad(d);

    for (int e = first_epoch; e < first_epoch + n_epochs; ++e) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        auto rng = make_rng(seed, "shuffle", static_cast<std::uint64_t>(e));
        std::shuffle(order.begin(), order.end(), rng);

        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            std::size_t end = std::min(n, start + static_cast<std::size_t>(cfg.batch_size));
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t i = start; i < end; ++i) {
                std::size_t idx = order[i];
                accumulate_gradient(spec, params, data.features[idx], data.labels[idx], grad);
            }
            double inv = 1.0 / static_cast<double>(end - start);
            for (std::size_t j = 0; j < d; ++j) {
                double g = grad[j] * inv + cfg.weight_decay * params[j];
                velocity[j] = cfg.momentum * velocity[j] + g;
                params[j] -= cfg.learning_rate * velocity[j];
            }
        }
    }
}

ClientUpdate local_train(const ModelSpec& spec, const ParameterVector& global,
                         const LabeledDataset& data, const TrainConfig& cfg,
                         std::uint64_t seed, int client_id, ClientRole role) {
    cfg.validate();
    if (data.empty()) throw std::invalid_argument("empty client dataset");
    if (static_cast<int>(global.size()) != spec.param_dim()) {
        throw std::invalid_argument("local_train: parameter dimension mismatch");
    }
    ParameterVector params = global;
    ParameterVector velocity(params.size(), 0.0);
    run_sgd(spec, params, velocity, data, cfg, seed, 0, cfg.local_epochs);

    ClientUpdate upd;
    upd.client_id = client_id;
    upd.role = role;
    upd.delta.resize(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) upd.delta[i] = params[i] - global[i];
    return upd;
}

std::pair<double, double> evaluate(const ModelSpec& spec, const ParameterVector& params,
                                   const LabeledDataset& data) {
    if (data.empty()) throw std::invalid_argument("evaluate: empty dataset");
    double loss = 0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto logits = forward_logits(spec, params, data.features[i]);
        loss += log_sum_exp(logits) - logits[data.labels[i]];
        int argmax = static_cast<int>(std::max_element(logits.begin(), logits.end()) -
                                      logits.begin());
        if (argmax == data.labels[i]) ++correct;
    }
    double n = static_cast<double>(data.size());
    return {loss / n, static_cast<double>(correct) / n};
}

}  // namespace flspec
