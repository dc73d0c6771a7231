#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "flspec/model.hpp"

namespace flspec {

struct SyntheticTaskConfig {
    int num_classes = 10;
    int input_dim = 20;
    int samples_per_class_train = 100;
    int samples_per_class_test = 50;
    double class_center_scale = 1.0;
    double noise_sigma = 1.0;

    void validate() const;
};

struct PartitionPlan {
    // client index -> sample indices into the training set
    std::vector<std::vector<int>> assignments;

    int n_clients() const { return static_cast<int>(assignments.size()); }
};

// Feature rows grouped by label; sets[label] may be empty.
using PerLabelSamples = std::vector<std::vector<std::vector<double>>>;

// Per-class Gaussian blobs. Class centers drawn once from
// N(0, class_center_scale^2 I); samples from N(center, noise_sigma^2 I).
std::pair<LabeledDataset, LabeledDataset> generate_synthetic_task(const SyntheticTaskConfig& cfg,
                                                                  std::uint64_t seed);

// Per class, a Dirichlet(beta) draw over clients allocates that class's samples
// proportionally with largest-remainder rounding. Every sample assigned exactly once.
PartitionPlan partition_dirichlet(const LabeledDataset& data, int n_clients, double beta,
                                  std::uint64_t seed);

// Union of the listed clients' samples grouped by label.
PerLabelSamples collect_compromised_data(const PartitionPlan& plan, const LabeledDataset& data,
                                         const std::vector<int>& compromised_ids);

std::vector<int> label_histogram(const PerLabelSamples& sets);

LabeledDataset dataset_subset(const LabeledDataset& data, const std::vector<int>& indices);

// CSV with feature columns then `label`, for reproducibility debugging.
void dump_csv(const LabeledDataset& data, const std::string& path);
LabeledDataset load_csv(const std::string& path);

}  // namespace flspec
