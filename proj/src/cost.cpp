#include "flspec/cost.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flspec {

double attack_cost(const AdversaryCounts& adv, const CostParams& p) {
    if (adv.n_benign < 0 || adv.n_compromised < 0 || adv.n_fake < 0) {
        throw std::invalid_argument("attack_cost: counts must be >= 0");
    }
    if (p.mode == CostMode::UnitCosts) {
        return p.fake_unit_cost * adv.n_fake + p.compromised_unit_cost * adv.n_compromised;
    }
    if (p.device_price <= 0 || p.app_prevalence <= 0 || p.app_prevalence > 1) {
        throw std::invalid_argument("attack_cost: invalid botnet parameters");
    }
    const double k = 1.0 / p.app_prevalence;
    const double m = adv.n_fake + adv.n_compromised;
    const double m_prime = adv.n_compromised;
    if (m_prime == 0) return m * p.device_price;
    if (adv.n_fake == 0) return k * m_prime * p.device_price;
    return std::max(k * m_prime, m) * p.device_price;
}

double malicious_ratio(const AdversaryCounts& adv) {
    const long long total =
        static_cast<long long>(adv.n_benign) + adv.n_compromised + adv.n_fake;
    if (total <= 0) throw std::invalid_argument("malicious_ratio: empty population");
    return static_cast<double>(adv.n_compromised + adv.n_fake) / static_cast<double>(total);
}

int solve_fake_count(int n_benign_total, int n_compromised, double target_ratio) {
    if (target_ratio < 0 || target_ratio >= 1) {
        throw std::invalid_argument("solve_fake_count: target_ratio must be in [0, 1)");
    }
    if (n_compromised > n_benign_total) {
        throw std::invalid_argument("solve_fake_count: more compromised than total clients");
    }
    const int n_benign = n_benign_total - n_compromised;
    auto ratio_ok = [&](int n_fake) {
        AdversaryCounts adv{n_benign, n_compromised, n_fake};
        return malicious_ratio(adv) >= target_ratio;
    };
    if (ratio_ok(0)) return 0;

    // f* = (r * total - c) / (1 - r), then settle exactly by the ratio test.
    double guess = (target_ratio * n_benign_total - n_compromised) / (1.0 - target_ratio);
    int f = std::max(0, static_cast<int>(std::ceil(guess)) - 2);
    while (!ratio_ok(f)) ++f;
    return f;
}

}  // namespace flspec
