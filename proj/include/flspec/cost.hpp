#pragma once

namespace flspec {

enum class CostMode {
    Botnet,     // zombie devices at device_price, app_prevalence of them usable
    UnitCosts,  // flat f per fake client, c per compromised client
};

struct CostParams {
    CostMode mode = CostMode::Botnet;
    double device_price = 1.0;
    double app_prevalence = 0.01;
    double fake_unit_cost = 1.0;
    double compromised_unit_cost = 100.0;
};

struct AdversaryCounts {
    int n_benign = 0;
    int n_compromised = 0;
    int n_fake = 0;
};

// Botnet model: m = fake + compromised total, m' = compromised, k = 1/prevalence.
//   pure fake: m * price; pure compromised: k*m' * price; hybrid: max(k*m', m) * price.
double attack_cost(const AdversaryCounts& adv, const CostParams& p);

// (fake + compromised) / (fake + compromised + benign)
double malicious_ratio(const AdversaryCounts& adv);

// Smallest n_fake reaching at least target_ratio, given
// n_benign = n_benign_total - n_compromised.
int solve_fake_count(int n_benign_total, int n_compromised, double target_ratio);

}  // namespace flspec
