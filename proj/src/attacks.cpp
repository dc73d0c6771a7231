#include "flspec/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flspec/rng.hpp"

namespace flspec {

void GammaSearchConfig::validate() const {
    if (!(gamma_lo > 0) || !(gamma_lo < gamma_hi)) {
        throw std::invalid_argument("need 0 < gamma_lo < gamma_hi");
    }
    if (!(rel_precision > 0) || !(rel_precision < 0.5)) {
        throw std::invalid_argument("rel_precision must be in (0, 0.5)");
    }
    if (grid_points < 10) throw std::invalid_argument("grid_points must be >= 10");
}

ParameterVector craft_mpaf(const ParameterVector& global, const MpafConfig& cfg) {
    if (global.size() != cfg.base_model.size()) {
        throw std::invalid_argument("craft_mpaf: dimension mismatch");
    }
    if (cfg.lambda <= 0) throw std::invalid_argument("craft_mpaf: lambda must be > 0");
    ParameterVector out(global.size());
    for (std::size_t j = 0; j < global.size(); ++j) {
        out[j] = cfg.lambda * (cfg.base_model[j] - global[j]);
    }
    return out;
}

ParameterVector benign_reference(const std::vector<ClientUpdate>& reference_updates) {
    return agg_fedavg(reference_updates);
}

ParameterVector perturbation_direction(PerturbKind kind,
                                       const std::vector<ClientUpdate>& reference_updates) {
    if (reference_updates.empty()) {
        throw std::invalid_argument("perturbation_direction: empty references");
    }
    ParameterVector ref = benign_reference(reference_updates);
    const std::size_t d = ref.size();
    ParameterVector omega(d, 0.0);

    switch (kind) {
        case PerturbKind::InverseUnit: {
            double norm = l2_norm(ref);
            if (norm > 0) {
                for (std::size_t j = 0; j < d; ++j) omega[j] = -ref[j] / norm;
            }
            break;
        }
        case PerturbKind::InverseSign: {
            for (std::size_t j = 0; j < d; ++j) {
                omega[j] = ref[j] > 0 ? -1.0 : (ref[j] < 0 ? 1.0 : 0.0);
            }
            break;
        }
        case PerturbKind::InverseStd: {
            const std::size_t n = reference_updates.size();
            if (n < 2) throw std::invalid_argument("inverse-std needs >= 2 references");
            for (std::size_t j = 0; j < d; ++j) {
                double var = 0;
                for (const auto& u : reference_updates) {
                    double diff = u.delta[j] - ref[j];
                    var += diff * diff;
                }
                omega[j] = -std::sqrt(var / static_cast<double>(n - 1));
            }
            break;
        }
    }
    return omega;
}

ParameterVector dyn_opt_fedavg(const std::vector<ClientUpdate>& reference_updates,
                               std::uint64_t seed, double fixed_gamma) {
    ParameterVector ref = benign_reference(reference_updates);
    auto rng = make_rng(seed, "dyn_opt_fedavg");
    std::normal_distribution<double> unit(0.0, 1.0);
    ParameterVector dir(ref.size());
    double norm = 0;
    do {
        for (double& v : dir) v = unit(rng);
        norm = l2_norm(dir);
    } while (norm == 0.0);
    for (std::size_t j = 0; j < ref.size(); ++j) ref[j] += fixed_gamma * dir[j] / norm;
    return ref;
}

namespace {

// Simulated round: m copies of theta^b + gamma*omega plus references standing
// in for the n-m benign slots (cycled when there are fewer references than
// slots). Stand-in ids precede malicious ids so client-id tie-breaks never
// favor the adversary.
struct RoundSim {
    std::vector<ClientUpdate> pool;  // stand-ins first, then m malicious slots
    int n_standins = 0;
    int m = 0;

    void set_gamma(const ParameterVector& ref, const ParameterVector& omega, double gamma) {
        ParameterVector mal(ref.size());
        for (std::size_t j = 0; j < ref.size(); ++j) mal[j] = ref[j] + gamma * omega[j];
        for (int i = 0; i < m; ++i) pool[n_standins + i].delta = mal;
    }
};

RoundSim build_sim(const std::vector<ClientUpdate>& refs, int n_round, int m_round) {
    RoundSim sim;
    sim.m = m_round;
    sim.n_standins = std::max(0, n_round - m_round);
    if (sim.n_standins == 0) sim.n_standins = static_cast<int>(refs.size());
    for (int i = 0; i < sim.n_standins; ++i) {
        sim.pool.push_back({i, ClientRole::Benign, refs[i % refs.size()].delta});
    }
    for (int i = 0; i < m_round; ++i) {
        sim.pool.push_back({sim.n_standins + i, ClientRole::Compromised, {}});
    }
    return sim;
}

}  // namespace

GammaResult dyn_opt_multikrum(const std::vector<ClientUpdate>& reference_updates,
                              const ParameterVector& omega, int n_round, int m_round,
                              const GammaSearchConfig& search) {
    search.validate();
    ParameterVector ref = benign_reference(reference_updates);
    if (m_round == 0) return {ref, 0.0, true, false, 0.0};

    RoundSim sim = build_sim(reference_updates, n_round, m_round);
    const int n = static_cast<int>(sim.pool.size());
    const int c = n - 2 * m_round - 3;
    if (c < 1) throw std::invalid_argument("too many malicious for Multi-Krum");

    auto make_update = [&](double gamma) {
        ParameterVector u(ref.size());
        for (std::size_t j = 0; j < ref.size(); ++j) u[j] = ref[j] + gamma * omega[j];
        return u;
    };

    bool saw_infeasible = false;
    auto feasible = [&](double gamma) {
        sim.set_gamma(ref, omega, gamma);
        auto selected = multikrum_select(sim.pool, m_round);
        int hits = 0;
        for (int idx : selected) {
            if (idx >= sim.n_standins) ++hits;
        }
        bool ok = hits == m_round;
        if (!ok) saw_infeasible = true;
        return ok;
    };

    if (c < m_round) {
        // The selection set cannot hold all malicious copies.
        saw_infeasible = true;
        return {make_update(search.gamma_lo), search.gamma_lo, false, true, 0.0};
    }

    double lo, hi;
    if (feasible(search.gamma_init)) {
        lo = search.gamma_init;
        hi = 2 * lo;
        while (feasible(hi)) {
            lo = hi;
            hi *= 2;
            if (hi > 1e15) return {make_update(lo), lo, true, saw_infeasible, 0.0};
        }
    } else {
        hi = search.gamma_init;
        lo = hi / 2;
        while (lo >= search.gamma_lo && !feasible(lo)) {
            hi = lo;
            lo /= 2;
        }
        if (lo < search.gamma_lo) {
            if (!feasible(search.gamma_lo)) {
                return {make_update(search.gamma_lo), search.gamma_lo, false, true, 0.0};
            }
            lo = search.gamma_lo;
        }
    }

    // invariant: feasible(lo), infeasible(hi)
    while (hi - lo > search.rel_precision * lo) {
        double mid = 0.5 * (lo + hi);
        if (feasible(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {make_update(lo), lo, true, saw_infeasible, 0.0};
}

GammaResult dyn_opt_trimmed_median(const std::vector<ClientUpdate>& reference_updates,
                                   const ParameterVector& omega, AggKind agr_kind, int n_round,
                                   int m_round, const GammaSearchConfig& search) {
    search.validate();
    if (agr_kind != AggKind::TrimmedMean && agr_kind != AggKind::Median) {
        throw std::invalid_argument("dyn_opt_trimmed_median: agr must be trimmed-mean or median");
    }
    ParameterVector ref = benign_reference(reference_updates);

    auto make_update = [&](double gamma) {
        ParameterVector u(ref.size());
        for (std::size_t j = 0; j < ref.size(); ++j) u[j] = ref[j] + gamma * omega[j];
        return u;
    };

    if (m_round == 0) return {make_update(search.gamma_lo), search.gamma_lo, true, false, 0.0};

    RoundSim sim = build_sim(reference_updates, n_round, m_round);
    const int n = static_cast<int>(sim.pool.size());
    int trim_m = m_round;
    if (agr_kind == AggKind::TrimmedMean && n - 2 * trim_m < 1) trim_m = (n - 1) / 2;

    std::vector<std::pair<double, double>> evaluated;  // (gamma, objective)
    auto objective = [&](double gamma) {
        sim.set_gamma(ref, omega, gamma);
        ParameterVector agg = agr_kind == AggKind::TrimmedMean
                                  ? agg_trimmed_mean(sim.pool, trim_m)
                                  : agg_median(sim.pool);
        double s = 0;
        for (std::size_t j = 0; j < ref.size(); ++j) {
            double diff = ref[j] - agg[j];
            s += diff * diff;
        }
        double obj = std::sqrt(s);
        evaluated.emplace_back(gamma, obj);
        return obj;
    };

    // Log-spaced grid, then golden-section refinement around the best point.
    const double log_lo = std::log(search.gamma_lo);
    const double log_hi = std::log(search.gamma_hi);
    int best_i = 0;
    double best_obj = -1;
    std::vector<double> grid(search.grid_points);
    for (int i = 0; i < search.grid_points; ++i) {
        grid[i] = std::exp(log_lo + (log_hi - log_lo) * i / (search.grid_points - 1));
        double obj = objective(grid[i]);
        if (obj > best_obj) {
            best_obj = obj;
            best_i = i;
        }
    }

    double a = grid[std::max(0, best_i - 1)];
    double b = grid[std::min(search.grid_points - 1, best_i + 1)];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - (b - a) * inv_phi;
    double x2 = a + (b - a) * inv_phi;
    double f1 = objective(x1);
    double f2 = objective(x2);
    while (b - a > search.rel_precision * std::max(a, search.gamma_lo)) {
        if (f1 >= f2) {  // prefer the left on ties
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - (b - a) * inv_phi;
            f1 = objective(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + (b - a) * inv_phi;
            f2 = objective(x2);
        }
    }

    // Smallest evaluated gamma attaining the maximum.
    double max_obj = -1;
    for (const auto& [g, o] : evaluated) max_obj = std::max(max_obj, o);
    double gamma_star = search.gamma_hi;
    for (const auto& [g, o] : evaluated) {
        if (o == max_obj && g < gamma_star) gamma_star = g;
    }
    return {make_update(gamma_star), gamma_star, true, false, max_obj};
}

ParameterVector dyn_opt_norm_bounding(const std::vector<ClientUpdate>& reference_updates,
                                      const ParameterVector& omega, double tau, double gamma) {
    if (tau <= 0) throw std::invalid_argument("dyn_opt_norm_bounding: tau must be > 0");
    ParameterVector ref = benign_reference(reference_updates);
    for (std::size_t j = 0; j < ref.size(); ++j) ref[j] += gamma * omega[j];
    return scale_to_norm(ref, tau);
}

}  // namespace flspec
