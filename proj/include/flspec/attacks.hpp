#pragma once

#include <cstdint>
#include <vector>

#include "flspec/aggregation.hpp"
#include "flspec/model.hpp"

namespace flspec {

enum class PerturbKind { InverseUnit, InverseSign, InverseStd };

struct GammaSearchConfig {
    double gamma_init = 10.0;
    double rel_precision = 1e-3;
    int grid_points = 50;
    double gamma_lo = 1e-2;
    double gamma_hi = 1e2;

    void validate() const;
};

struct MpafConfig {
    ParameterVector base_model;  // theta', the randomly initialized base model
    double lambda = 1e6;
};

struct GammaResult {
    ParameterVector update;
    double gamma_star = 0.0;
    bool constraint_met = true;   // multi-krum: a feasible gamma was found
    bool saw_infeasible = false;  // multi-krum: search observed an infeasible gamma
    double objective = 0.0;       // trimmed-mean/median: value at gamma_star
};

// lambda * (theta' - global); identical for all fake clients in the round.
// Needs only the global model.
ParameterVector craft_mpaf(const ParameterVector& global, const MpafConfig& cfg);

// Mean of the adversary's reference updates (theta^b).
ParameterVector benign_reference(const std::vector<ClientUpdate>& reference_updates);

// inverse-unit: -theta^b/||theta^b||; inverse-sign: -sign(theta^b);
// inverse-std: -(per-coordinate sample std of the references, n-1 denominator).
ParameterVector perturbation_direction(PerturbKind kind,
                                       const std::vector<ClientUpdate>& reference_updates);

// theta^b + gamma * omega_rand with a seeded unit-norm random direction.
ParameterVector dyn_opt_fedavg(const std::vector<ClientUpdate>& reference_updates,
                               std::uint64_t seed, double fixed_gamma = 1e6);

// Largest gamma (to rel_precision) keeping all m_round malicious copies inside
// the Multi-Krum selection set of the simulated round (m copies of
// theta^b + gamma*omega plus the references standing in for benign updates).
GammaResult dyn_opt_multikrum(const std::vector<ClientUpdate>& reference_updates,
                              const ParameterVector& omega, int n_round, int m_round,
                              const GammaSearchConfig& search);

// Maximizes ||theta^b - f_agr(simulated round)||_2 over gamma on a log grid,
// refined by golden-section; near-ties resolve toward smaller gamma.
GammaResult dyn_opt_trimmed_median(const std::vector<ClientUpdate>& reference_updates,
                                   const ParameterVector& omega, AggKind agr_kind, int n_round,
                                   int m_round, const GammaSearchConfig& search);

// Scale(theta^b + gamma*omega, tau)
ParameterVector dyn_opt_norm_bounding(const std::vector<ClientUpdate>& reference_updates,
                                      const ParameterVector& omega, double tau, double gamma);

}  // namespace flspec
