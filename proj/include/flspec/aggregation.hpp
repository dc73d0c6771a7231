#pragma once

#include <vector>

#include "flspec/model.hpp"

namespace flspec {

enum class AggKind { FedAvg, Median, TrimmedMean, MultiKrum, NormBounding, AdaptiveStolen };

struct AggregatorConfig {
    AggKind kind = AggKind::FedAvg;
    double tau = 1.0;  // norm-bounding / adaptive only
    // Adaptive-stolen only: weight by the literal formula L_s/(L_s+L_v) instead
    // of the intended L_v/(L_s+L_v).
    bool literal_stolen_weights = false;
};

// Unweighted coordinate-wise mean.
ParameterVector agg_fedavg(const std::vector<ClientUpdate>& updates);

// Per-coordinate median; even counts use the midpoint of the two central values.
ParameterVector agg_median(const std::vector<ClientUpdate>& updates);

// Per coordinate, drop the m largest and m smallest values, average the rest.
ParameterVector agg_trimmed_mean(const std::vector<ClientUpdate>& updates, int m);

// Iterated Krum. score(i) = sum of squared L2 distances to its n'-m-2 nearest
// peers, with n' the current pool size; the minimizer moves to the selection
// set until it holds c = n-2m-3 updates. Ties break on lower client id.
std::vector<int> multikrum_select(const std::vector<ClientUpdate>& updates, int m);

ParameterVector agg_multi_krum(const std::vector<ClientUpdate>& updates, int m);

// Scale(u, tau) = u * min(1, tau/||u||_2)
ParameterVector scale_to_norm(const ParameterVector& u, double tau);

// Mean of per-update norm projections.
ParameterVector agg_norm_bounding(const std::vector<ClientUpdate>& updates, double tau);

// Stolen-data weighted aggregation: projects every update to norm <= tau, then
// weights update i by L_v,i / (L_s,i + L_v,i) normalized to sum 1, where L_s,i
// and L_v,i are the losses of (global + u_i) on the stolen and validation sets.
ParameterVector agg_adaptive_stolen(const std::vector<ClientUpdate>& updates,
                                    const ParameterVector& global, const LabeledDataset& stolen,
                                    const LabeledDataset& validation, double tau,
                                    const ModelSpec& spec, bool literal_weights = false);

// Weights computed by agg_adaptive_stolen (exposed for inspection/tests).
std::vector<double> adaptive_stolen_weights(const std::vector<ClientUpdate>& updates,
                                            const ParameterVector& global,
                                            const LabeledDataset& stolen,
                                            const LabeledDataset& validation, double tau,
                                            const ModelSpec& spec, bool literal_weights = false);

}  // namespace flspec
