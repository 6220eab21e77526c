// Test-side reference implementations, written independently of the library
// code so agreement between the two is meaningful evidence.
#ifndef FOGOPT_TESTS_ORACLES_HPP_
#define FOGOPT_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "fogopt/model.hpp"

namespace oracles {

// Straight-line re-evaluation of the cooperative objective: every sum written
// out long-hand from the response-time definition, no shared helpers.
inline double coop_objective_reference(const fogopt::Allocation& a,
                                       const fogopt::Scenario& s) {
    const std::size_t n = s.size();
    double lambda_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) lambda_total += s.nodes[i].arrival_rate;

    std::vector<double> load(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) load[i] += a.phi(k, i);

    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double r = s.nodes[j].user_rtt;
        for (std::size_t i = 0; i < n; ++i) {
            const double sojourn = 1.0 / (s.nodes[i].service_rate - load[i]);
            r += a.phi(j, i) * (s.inter_rtt(j, i) + sojourn) / lambda_total;
        }
        r += a.phi_cloud[j] / s.nodes[j].arrival_rate * s.cloud_rtt;
        total += r;
    }
    return total;
}

// Single-node response time, re-derived from its definition.
inline double partial_response_reference(double tau_u, double tau_f, double mu,
                                         double lambda, double alpha) {
    return tau_u + alpha / (mu - alpha * lambda) + (1.0 - alpha) * tau_f;
}

// Exhaustive grid search for the optimal local fraction. The efficiency cap
// acts as a floor on the local share (per-unit power falls with load), so the
// single-node feasible interval is [min(chi/lambda, hi), hi] with
// hi = min(1, (1-margin)*mu/lambda). With efficiency_floor=false the search
// instead runs over [0, min(hi, chi/lambda)], the per-column feasible set of
// the cooperative problem restricted to one node.
inline double grid_alpha(const fogopt::NodeParams& n, double cloud_rtt,
                         std::size_t points, bool efficiency_floor = true) {
    const double chi = fogopt::capacity_chi(n.power);
    double hi = std::min(
        1.0,
        (1.0 - fogopt::kStabilityMargin) * n.service_rate / n.arrival_rate);
    double lo = 0.0;
    if (efficiency_floor) {
        lo = std::min(chi / n.arrival_rate, hi);
    } else {
        hi = std::min(hi, chi / n.arrival_rate);
    }
    double best_alpha = lo;
    double best_val = partial_response_reference(n.user_rtt, cloud_rtt,
                                                 n.service_rate, n.arrival_rate, lo);
    for (std::size_t k = 1; k < points; ++k) {
        const double alpha =
            lo + (hi - lo) * static_cast<double>(k) / (points - 1);
        const double val = partial_response_reference(
            n.user_rtt, cloud_rtt, n.service_rate, n.arrival_rate, alpha);
        if (val < best_val) {
            best_val = val;
            best_alpha = alpha;
        }
    }
    return best_alpha;
}

// Random node with a mix of binding regimes.
inline fogopt::NodeParams random_node(std::mt19937& rng, const std::string& id) {
    auto uni = [&](double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(rng);
    };
    const double pue = uni(1.0, 2.0);
    const double w_dyn = uni(0.01, 0.5);
    const double w_stat = uni(0.5, 20.0);
    const double eta = pue * w_dyn + uni(0.05, 5.0);
    fogopt::PowerParams power(pue, w_stat, w_dyn, eta);
    const double mu = uni(2.0, 20.0);
    const double lambda = uni(0.5, 0.95) * mu;
    return fogopt::NodeParams(id, lambda, mu, uni(0.0, 0.05), power);
}

// Random scenario with comfortable stability margins, used by the property
// suites (convexity chords, feasibility projections, protocol invariants).
inline fogopt::Scenario random_scenario(std::size_t n, unsigned seed,
                                        bool full_mask = true) {
    std::mt19937 rng(seed);
    auto uni = [&](double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(rng);
    };
    fogopt::Scenario s;
    for (std::size_t i = 0; i < n; ++i)
        s.nodes.push_back(random_node(rng, "n" + std::to_string(i)));
    s.inter_rtt = fogopt::Mat(n, n, 0.0);
    s.coop_mask = fogopt::BoolMat(n, n, true);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = j + 1; i < n; ++i) {
            const double rtt = uni(0.005, 0.05);
            s.inter_rtt(j, i) = rtt;
            s.inter_rtt(i, j) = rtt;
            if (!full_mask) {
                const bool linked = uni(0.0, 1.0) < 0.7;
                s.coop_mask.set(j, i, linked);
                s.coop_mask.set(i, j, linked);
            }
        }
    }
    s.cloud_rtt = uni(0.05, 0.3);
    s.deadline = 1.0;
    return s;
}

// Heterogeneous heavy/light deployment in physical units: alternating
// overloaded and lightly loaded nodes, uniform 20 ms forwarding RTT, one
// shared cloud. This is the family the distributed-solver comparisons run on.
inline fogopt::Scenario heavy_light_scenario(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    auto uni = [&](double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(rng);
    };
    fogopt::Scenario s;
    for (std::size_t i = 0; i < n; ++i) {
        const double pue = uni(1.0, 1.5);
        const double w_dyn = uni(0.001, 0.005);
        const double w_stat = uni(5.0, 20.0);
        const bool heavy = (i % 2 == 0);
        const double lambda = heavy ? uni(400.0, 700.0) : uni(30.0, 80.0);
        const double mu = uni(380.0, 550.0);
        const double chi_target = uni(200.0, 400.0);
        const double eta = pue * w_dyn + pue * w_stat / chi_target;
        const double tau_u = uni(0.05, 0.2);
        s.nodes.emplace_back("n" + std::to_string(i), lambda, mu, tau_u,
                             fogopt::PowerParams(pue, w_stat, w_dyn, eta));
    }
    s.inter_rtt = fogopt::Mat(n, n, 0.0);
    s.coop_mask = fogopt::BoolMat(n, n, true);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = j + 1; i < n; ++i) {
            s.inter_rtt(j, i) = 0.02;
            s.inter_rtt(i, j) = 0.02;
        }
    s.cloud_rtt = uni(0.15, 0.3);
    s.deadline = 0.5;
    return s;
}

// Random feasible allocation: random row splits scaled into column capacity.
inline fogopt::Allocation random_feasible(const fogopt::Scenario& s,
                                          std::mt19937& rng) {
    const std::size_t n = s.size();
    fogopt::Allocation a = fogopt::Allocation::zeros(n);
    auto uni = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> w(n + 1, 0.0);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (s.coop_mask(j, i)) total += (w[i] = uni(0.0, 1.0));
        total += (w[n] = uni(0.5, 2.0));  // generous cloud share
        for (std::size_t i = 0; i < n; ++i)
            a.phi(j, i) = s.nodes[j].arrival_rate * w[i] / total;
        a.phi_cloud[j] = s.nodes[j].arrival_rate * w[n] / total;
    }
    // Shift any column-capacity excess to the cloud, largest contributors first.
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double cap = 0.9 * s.effective_capacity(i);
        double load = a.column_load(i);
        if (load <= cap) continue;
        const double scale = cap / load;
        for (std::size_t j = 0; j < n; ++j) {
            const double cut = a.phi(j, i) * (1.0 - scale);
            a.phi(j, i) -= cut;
            a.phi_cloud[j] += cut;
        }
    }
    return a;
}

}  // namespace oracles

#endif  // FOGOPT_TESTS_ORACLES_HPP_
