#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "flspec/data.hpp"

namespace flspec {

// Pluggable per-label data synthesizer. Labels whose fit set was empty cannot
// be sampled from.
class Synthesizer {
public:
    virtual ~Synthesizer() = default;
    virtual void fit(const PerLabelSamples& sets) = 0;
    virtual std::vector<std::vector<double>> sample(int label, int count,
                                                    std::uint64_t seed) const = 0;
    virtual bool has_label(int label) const = 0;
    virtual int num_labels() const = 0;
};

enum class CovarianceMode { Diagonal, Spherical };

struct GaussianSynthConfig {
    CovarianceMode covariance_mode = CovarianceMode::Diagonal;
    double variance_floor = 1e-3;
};

// Per-label Gaussian: stores sample mean and (floored) per-coordinate variance.
// A single-sample label degenerates to that sample plus floor-scale noise.
class GaussianSynthesizer : public Synthesizer {
public:
    explicit GaussianSynthesizer(GaussianSynthConfig cfg = {}) : cfg_(cfg) {}
    void fit(const PerLabelSamples& sets) override;
    std::vector<std::vector<double>> sample(int label, int count,
                                            std::uint64_t seed) const override;
    bool has_label(int label) const override;
    int num_labels() const override { return static_cast<int>(means_.size()); }

    const std::vector<double>& mean(int label) const { return means_.at(label); }
    const std::vector<double>& variance(int label) const { return vars_.at(label); }

private:
    GaussianSynthConfig cfg_;
    std::vector<std::vector<double>> means_;
    std::vector<std::vector<double>> vars_;
    std::vector<bool> fitted_;
};

// Re-emits the fitted samples verbatim (round-robin). Models the
// no-generative-model baseline.
class ReplaySynthesizer : public Synthesizer {
public:
    void fit(const PerLabelSamples& sets) override;
    std::vector<std::vector<double>> sample(int label, int count,
                                            std::uint64_t seed) const override;
    bool has_label(int label) const override;
    int num_labels() const override { return static_cast<int>(rows_.size()); }

private:
    PerLabelSamples rows_;
};

std::unique_ptr<Synthesizer> fit_synthesizer(const PerLabelSamples& sets,
                                             const GaussianSynthConfig& cfg);

// For each fitted label, samples_per_label * n_fake rows; absent labels
// contribute nothing.
LabeledDataset generate_fake_pool(const Synthesizer& s, int n_fake, int samples_per_label,
                                  std::uint64_t seed);

// Dirichlet(beta) split of the pool across fake clients.
std::vector<LabeledDataset> assign_fake_data(const LabeledDataset& pool, int n_fake, double beta,
                                             std::uint64_t seed);

}  // namespace flspec
