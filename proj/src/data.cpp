#include "flspec/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "flspec/rng.hpp"

namespace flspec {

void SyntheticTaskConfig::validate() const {
    if (num_classes < 1 || input_dim < 1 || samples_per_class_train < 1 ||
        samples_per_class_test < 1) {
        throw std::invalid_argument("synthetic task counts must be >= 1");
    }
    if (noise_sigma <= 0) throw std::invalid_argument("noise_sigma must be > 0");
}

std::pair<LabeledDataset, LabeledDataset> generate_synthetic_task(const SyntheticTaskConfig& cfg,
                                                                  std::uint64_t seed) {
    cfg.validate();
    std::vector<std::vector<double>> centers(cfg.num_classes,
                                             std::vector<double>(cfg.input_dim));
    {
        auto rng = make_rng(seed, "centers");
        std::normal_distribution<double> dist(0.0, cfg.class_center_scale);
        for (auto& c : centers)
            for (double& v : c) v = dist(rng);
    }

    auto draw = [&](const char* tag, int per_class) {
        LabeledDataset ds;
        ds.num_classes = cfg.num_classes;
        for (int k = 0; k < cfg.num_classes; ++k) {
            auto rng = make_rng(seed, tag, static_cast<std::uint64_t>(k));
            std::normal_distribution<double> noise(0.0, cfg.noise_sigma);
            for (int i = 0; i < per_class; ++i) {
                std::vector<double> x(cfg.input_dim);
                for (int j = 0; j < cfg.input_dim; ++j) x[j] = centers[k][j] + noise(rng);
                ds.features.push_back(std::move(x));
                ds.labels.push_back(k);
            }
        }
        return ds;
    };

    return {draw("train", cfg.samples_per_class_train), draw("test", cfg.samples_per_class_test)};
}

PartitionPlan partition_dirichlet(const LabeledDataset& data, int n_clients, double beta,
                                  std::uint64_t seed) {
    if (n_clients < 1) throw std::invalid_argument("n_clients must be >= 1");
    if (beta <= 0) throw std::invalid_argument("beta must be > 0");

    PartitionPlan plan;
    plan.assignments.assign(n_clients, {});
    int num_classes = 0;
    for (int y : data.labels) num_classes = std::max(num_classes, y + 1);

    for (int k = 0; k < num_classes; ++k) {
        std::vector<int> idx;
        for (std::size_t i = 0; i < data.labels.size(); ++i) {
            if (data.labels[i] == k) idx.push_back(static_cast<int>(i));
        }
        if (idx.empty()) continue;

        auto rng = make_rng(seed, "dirichlet", static_cast<std::uint64_t>(k));
        std::shuffle(idx.begin(), idx.end(), rng);

        // Dirichlet(beta) via normalized Gamma(beta, 1) draws.
        std::vector<double> p(n_clients);
        std::gamma_distribution<double> gamma(beta, 1.0);
        double sum = 0;
        for (double& v : p) {
            v = gamma(rng);
            sum += v;
        }
        if (sum <= 0) {
            std::fill(p.begin(), p.end(), 1.0);
            sum = static_cast<double>(n_clients);
        }

        // Largest-remainder apportionment of idx.size() samples.
        const int total = static_cast<int>(idx.size());
        std::vector<int> counts(n_clients);
        std::vector<std::pair<double, int>> rema(n_clients);
        int assigned = 0;
        for (int c = 0; c < n_clients; ++c) {
            double quota = p[c] / sum * total;
            counts[c] = static_cast<int>(std::floor(quota));
            assigned += counts[c];
            rema[c] = {quota - counts[c], c};
        }
        std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        for (int r = 0; r < total - assigned; ++r) ++counts[rema[r].second];

        int pos = 0;
        for (int c = 0; c < n_clients; ++c) {
            for (int i = 0; i < counts[c]; ++i) plan.assignments[c].push_back(idx[pos++]);
        }
    }
    for (auto& a : plan.assignments) std::sort(a.begin(), a.end());
    return plan;
}

PerLabelSamples collect_compromised_data(const PartitionPlan& plan, const LabeledDataset& data,
                                         const std::vector<int>& compromised_ids) {
    int num_classes = data.num_classes;
    for (int y : data.labels) num_classes = std::max(num_classes, y + 1);
    PerLabelSamples sets(num_classes);
    for (int id : compromised_ids) {
        if (id < 0 || id >= plan.n_clients()) {
            throw std::invalid_argument("unknown client id in collect_compromised_data");
        }
        for (int s : plan.assignments[id]) {
            sets[data.labels[s]].push_back(data.features[s]);
        }
    }
    return sets;
}

std::vector<int> label_histogram(const PerLabelSamples& sets) {
    std::vector<int> counts(sets.size());
    for (std::size_t k = 0; k < sets.size(); ++k) counts[k] = static_cast<int>(sets[k].size());
    return counts;
}

LabeledDataset dataset_subset(const LabeledDataset& data, const std::vector<int>& indices) {
    LabeledDataset out;
    out.num_classes = data.num_classes;
    for (int i : indices) {
        out.features.push_back(data.features[i]);
        out.labels.push_back(data.labels[i]);
    }
    return out;
}

void dump_csv(const LabeledDataset& data, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for write: " + path);
    const int d = data.input_dim();
    for (int j = 0; j < d; ++j) f << "f" << j << ",";
    f << "label\n";
    f.precision(17);
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (int j = 0; j < d; ++j) f << data.features[i][j] << ",";
        f << data.labels[i] << "\n";
    }
}

LabeledDataset load_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    LabeledDataset ds;
    std::string line;
    std::getline(f, line);  // header
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.empty()) continue;
        ds.labels.push_back(static_cast<int>(row.back()));
        row.pop_back();
        ds.features.push_back(std::move(row));
    }
    for (int y : ds.labels) ds.num_classes = std::max(ds.num_classes, y + 1);
    return ds;
}

}  // namespace flspec
