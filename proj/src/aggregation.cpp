#include "flspec/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace flspec {

namespace {

void require_nonempty(const std::vector<ClientUpdate>& updates, const char* who) {
    if (updates.empty()) throw std::invalid_argument(std::string(who) + ": empty update list");
    const std::size_t d = updates[0].delta.size();
    for (const auto& u : updates) {
        if (u.delta.size() != d) {
            throw std::invalid_argument(std::string(who) + ": dimension mismatch");
        }
    }
}

}  // namespace

ParameterVector agg_fedavg(const std::vector<ClientUpdate>& updates) {
    require_nonempty(updates, "agg_fedavg");
    const std::size_t d = updates[0].delta.size();
    ParameterVector out(d, 0.0);
    for (const auto& u : updates) {
        for (std::size_t j = 0; j < d; ++j) out[j] += u.delta[j];
    }
    double inv = 1.0 / static_cast<double>(updates.size());
    for (double& v : out) v *= inv;
    return out;
}

ParameterVector agg_median(const std::vector<ClientUpdate>& updates) {
    require_nonempty(updates, "agg_median");
    const std::size_t d = updates[0].delta.size();
    const std::size_t n = updates.size();
    ParameterVector out(d);
    std::vector<double> col(n);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = updates[i].delta[j];
        std::sort(col.begin(), col.end());
        out[j] = (n % 2 == 1) ? col[n / 2] : 0.5 * (col[n / 2 - 1] + col[n / 2]);
    }
    return out;
}

ParameterVector agg_trimmed_mean(const std::vector<ClientUpdate>& updates, int m) {
    require_nonempty(updates, "agg_trimmed_mean");
    const int n = static_cast<int>(updates.size());
    if (m < 0) throw std::invalid_argument("agg_trimmed_mean: m must be >= 0");
    if (n - 2 * m < 1) throw std::invalid_argument("over-trimming");
    const std::size_t d = updates[0].delta.size();
    ParameterVector out(d);
    std::vector<double> col(n);
    for (std::size_t j = 0; j < d; ++j) {
        for (int i = 0; i < n; ++i) col[i] = updates[i].delta[j];
        std::sort(col.begin(), col.end());
        double sum = 0;
        for (int i = m; i < n - m; ++i) sum += col[i];
        out[j] = sum / static_cast<double>(n - 2 * m);
    }
    return out;
}

std::vector<int> multikrum_select(const std::vector<ClientUpdate>& updates, int m) {
    require_nonempty(updates, "multikrum_select");
    const int n = static_cast<int>(updates.size());
    if (m < 0) throw std::invalid_argument("multikrum_select: m must be >= 0");
    const int c = n - 2 * m - 3;
    if (c < 1) throw std::invalid_argument("too many malicious for Multi-Krum");
    const std::size_t d = updates[0].delta.size();

    // Pairwise squared distances, computed once.
    std::vector<std::vector<double>> dist2(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int k = i + 1; k < n; ++k) {
            double s = 0;
            for (std::size_t j = 0; j < d; ++j) {
                double diff = updates[i].delta[j] - updates[k].delta[j];
                s += diff * diff;
            }
            dist2[i][k] = dist2[k][i] = s;
        }
    }

    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> selected;
    std::vector<double> ds;
    while (static_cast<int>(selected.size()) < c) {
        const int np = static_cast<int>(pool.size());
        const int neighbors = np - m - 2;
        int best = -1;
        double best_score = std::numeric_limits<double>::infinity();
        for (int i : pool) {
            ds.clear();
            for (int k : pool) {
                if (k != i) ds.push_back(dist2[i][k]);
            }
            std::sort(ds.begin(), ds.end());
            double score = 0;
            const int take = std::max(0, std::min(neighbors, static_cast<int>(ds.size())));
            for (int t = 0; t < take; ++t) score += ds[t];
            if (score < best_score ||
                (score == best_score && updates[i].client_id < updates[best].client_id)) {
                best_score = score;
                best = i;
            }
        }
        selected.push_back(best);
        pool.erase(std::find(pool.begin(), pool.end(), best));
    }
    return selected;
}

ParameterVector agg_multi_krum(const std::vector<ClientUpdate>& updates, int m) {
    auto selected = multikrum_select(updates, m);
    std::vector<ClientUpdate> chosen;
    chosen.reserve(selected.size());
    for (int i : selected) chosen.push_back(updates[i]);
    return agg_fedavg(chosen);
}

ParameterVector scale_to_norm(const ParameterVector& u, double tau) {
    if (tau <= 0) throw std::invalid_argument("scale_to_norm: tau must be > 0");
    double norm = l2_norm(u);
    if (norm <= tau || norm == 0.0) return u;
    double s = tau / norm;
    ParameterVector out(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) out[j] = u[j] * s;
    return out;
}

ParameterVector agg_norm_bounding(const std::vector<ClientUpdate>& updates, double tau) {
    require_nonempty(updates, "agg_norm_bounding");
    if (tau <= 0) throw std::invalid_argument("agg_norm_bounding: tau must be > 0");
    const std::size_t d = updates[0].delta.size();
    ParameterVector out(d, 0.0);
    for (const auto& u : updates) {
        ParameterVector scaled = scale_to_norm(u.delta, tau);
        for (std::size_t j = 0; j < d; ++j) out[j] += scaled[j];
    }
    double inv = 1.0 / static_cast<double>(updates.size());
    for (double& v : out) v *= inv;
    return out;
}

std::vector<double> adaptive_stolen_weights(const std::vector<ClientUpdate>& updates,
                                            const ParameterVector& global,
                                            const LabeledDataset& stolen,
                                            const LabeledDataset& validation, double tau,
                                            const ModelSpec& spec, bool literal_weights) {
    require_nonempty(updates, "agg_adaptive_stolen");
    if (stolen.empty() || validation.empty()) {
        throw std::invalid_argument("agg_adaptive_stolen: stolen and validation must be non-empty");
    }
    const std::size_t n = updates.size();
    std::vector<double> w(n);
    bool degenerate = false;
    for (std::size_t i = 0; i < n; ++i) {
        ParameterVector projected = scale_to_norm(updates[i].delta, tau);
        ParameterVector candidate = apply_update(global, projected);
        double ls = evaluate(spec, candidate, stolen).first;
        double lv = evaluate(spec, candidate, validation).first;
        if (ls + lv == 0.0) {
            degenerate = true;
            break;
        }
        w[i] = literal_weights ? ls / (ls + lv) : lv / (ls + lv);
    }
    if (degenerate) {
        std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(n));
        return w;
    }
    double sum = std::accumulate(w.begin(), w.end(), 0.0);
    if (sum <= 0) {
        std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(n));
    } else {
        for (double& v : w) v /= sum;
    }
    return w;
}

ParameterVector agg_adaptive_stolen(const std::vector<ClientUpdate>& updates,
                                    const ParameterVector& global, const LabeledDataset& stolen,
                                    const LabeledDataset& validation, double tau,
                                    const ModelSpec& spec, bool literal_weights) {
    auto w = adaptive_stolen_weights(updates, global, stolen, validation, tau, spec,
                                     literal_weights);
    const std::size_t d = updates[0].delta.size();
    ParameterVector out(d, 0.0);
    for (std::size_t i = 0; i < updates.size(); ++i) {
        ParameterVector projected = scale_to_norm(updates[i].delta, tau);
        for (std::size_t j = 0; j < d; ++j) out[j] += w[i] * projected[j];
    }
    return out;
}

}  // namespace flspec
