#include "flspec/synthesis.hpp"

#include <cmath>
#include <stdexcept>

#include "flspec/rng.hpp"

namespace flspec {

void GaussianSynthesizer::fit(const PerLabelSamples& sets) {
    if (cfg_.variance_floor <= 0) throw std::invalid_argument("variance_floor must be > 0");
    bool any = false;
    for (const auto& s : sets) any = any || !s.empty();
    if (!any) throw std::invalid_argument("no compromised data");

    const int L = static_cast<int>(sets.size());
    means_.assign(L, {});
    vars_.assign(L, {});
    fitted_.assign(L, false);

    for (int k = 0; k < L; ++k) {
        const auto& rows = sets[k];
        if (rows.empty()) continue;
        const std::size_t d = rows[0].size();
        const std::size_t n = rows.size();
        std::vector<double> mean(d, 0.0), var(d, cfg_.variance_floor);
        for (const auto& r : rows)
            for (std::size_t j = 0; j < d; ++j) mean[j] += r[j];
        for (double& v : mean) v /= static_cast<double>(n);
        if (n >= 2) {
            std::fill(var.begin(), var.end(), 0.0);
            for (const auto& r : rows) {
                for (std::size_t j = 0; j < d; ++j) {
                    double diff = r[j] - mean[j];
                    var[j] += diff * diff;
                }
            }
            for (double& v : var) v = std::max(cfg_.variance_floor, v / static_cast<double>(n - 1));
        }
        if (cfg_.covariance_mode == CovarianceMode::Spherical) {
            double avg = 0;
            for (double v : var) avg += v;
            avg /= static_cast<double>(d);
            std::fill(var.begin(), var.end(), std::max(cfg_.variance_floor, avg));
        }
        means_[k] = std::move(mean);
        vars_[k] = std::move(var);
        fitted_[k] = true;
    }
}

bool GaussianSynthesizer::has_label(int label) const {
    return label >= 0 && label < static_cast<int>(fitted_.size()) && fitted_[label];
}

std::vector<std::vector<double>> GaussianSynthesizer::sample(int label, int count,
                                                             std::uint64_t seed) const {
    if (!has_label(label)) {
        throw std::invalid_argument("synthesizer has no fitted data for this label");
    }
    const auto& mean = means_[label];
    const auto& var = vars_[label];
    auto rng = make_rng(seed, "gauss_sample", static_cast<std::uint64_t>(label));
    std::normal_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<double>> out(count, std::vector<double>(mean.size()));
    for (auto& row : out) {
        for (std::size_t j = 0; j < mean.size(); ++j) {
            row[j] = mean[j] + std::sqrt(var[j]) * unit(rng);
        }
    }
    return out;
}

void ReplaySynthesizer::fit(const PerLabelSamples& sets) {
    bool any = false;
    for (const auto& s : sets) any = any || !s.empty();
    if (!any) throw std::invalid_argument("no compromised data");
    rows_ = sets;
}

bool ReplaySynthesizer::has_label(int label) const {
    return label >= 0 && label < static_cast<int>(rows_.size()) && !rows_[label].empty();
}

std::vector<std::vector<double>> ReplaySynthesizer::sample(int label, int count,
                                                           std::uint64_t /*seed*/) const {
    if (!has_label(label)) {
        throw std::invalid_argument("synthesizer has no fitted data for this label");
    }
    std::vector<std::vector<double>> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(rows_[label][i % rows_[label].size()]);
    return out;
}

std::unique_ptr<Synthesizer> fit_synthesizer(const PerLabelSamples& sets,
                                             const GaussianSynthConfig& cfg) {
    auto s = std::make_unique<GaussianSynthesizer>(cfg);
    s->fit(sets);
    return s;
}

LabeledDataset generate_fake_pool(const Synthesizer& s, int n_fake, int samples_per_label,
                                  std::uint64_t seed) {
    if (n_fake < 1) throw std::invalid_argument("n_fake must be >= 1");
    LabeledDataset pool;
    pool.num_classes = s.num_labels();
    for (int k = 0; k < s.num_labels(); ++k) {
        if (!s.has_label(k)) continue;
        auto rows = s.sample(k, samples_per_label * n_fake,
                             derive_seed(seed, "fake_pool", static_cast<std::uint64_t>(k)));
        for (auto& r : rows) {
            pool.features.push_back(std::move(r));
            pool.labels.push_back(k);
        }
    }
    return pool;
}

std::vector<LabeledDataset> assign_fake_data(const LabeledDataset& pool, int n_fake, double beta,
                                             std::uint64_t seed) {
    if (n_fake < 1) throw std::invalid_argument("n_fake must be >= 1");
    PartitionPlan plan = partition_dirichlet(pool, n_fake, beta, seed);
    std::vector<LabeledDataset> out;
    out.reserve(n_fake);
    for (int c = 0; c < n_fake; ++c) out.push_back(dataset_subset(pool, plan.assignments[c]));
    return out;
}

}  // namespace flspec
