#ifndef FOGOPT_MODEL_HPP_
#define FOGOPT_MODEL_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "fogopt/errors.hpp"
#include "fogopt/matrix.hpp"

namespace fogopt {

/// Queue loads inside solvers are kept at or below (1 - kStabilityMargin) * mu
/// so response times stay finite.
inline constexpr double kStabilityMargin = 1e-3;

/// Power model of one fog node. Construction rejects parameter sets for which
/// the efficiency-cap capacity chi would be undefined or negative.
struct PowerParams {
    double pue = 1.0;                    // e, grid input / device consumption, >= 1
    double static_power = 0.0;           // w^S, watts
    double dynamic_power_per_unit = 0.0; // w^D, watts per workload-unit/s
    double efficiency_cap = 1.0;         // eta_bar, watts per workload-unit/s

    PowerParams() = default;
    PowerParams(double pue, double static_power, double dynamic_power_per_unit,
                double efficiency_cap);
};

struct NodeParams {
    std::string id;
    double arrival_rate = 1.0;   // lambda, workload-units/s
    double service_rate = 1.0;   // mu, workload-units/s
    double user_rtt = 0.0;       // tau^u, seconds
    PowerParams power;

    NodeParams() = default;
    NodeParams(std::string id, double arrival_rate, double service_rate,
               double user_rtt, PowerParams power);
};

/// A cooperative fog deployment: node set, forwarding RTTs, the shared cloud
/// RTT, the response-time deadline, and which pairs may forward to each other.
struct Scenario {
    std::vector<NodeParams> nodes;
    Mat inter_rtt;       // N x N, seconds, symmetric, zero diagonal
    double cloud_rtt = 0.0;
    double deadline = 1.0;
    BoolMat coop_mask;   // (j,i) true <=> j may forward to i; diagonal always true

    std::size_t size() const { return nodes.size(); }
    double total_arrival() const;

    /// min(chi_i, (1 - kStabilityMargin) * mu_i): the load cap used by every solver.
    double effective_capacity(std::size_t i) const;

    /// Throws std::invalid_argument on any invariant violation.
    void validate() const;
};

/// Workload split: phi(j,i) is node j's workload processed at node i,
/// phi_cloud[j] the part sent to the cloud. Units are absolute rates.
struct Allocation {
    Mat phi;                        // N x N
    std::vector<double> phi_cloud;  // length N

    static Allocation zeros(std::size_t n);
    /// The feasible starting point with everything sent to the cloud.
    static Allocation all_cloud(const Scenario& s);

    std::size_t size() const { return phi_cloud.size(); }
    /// Total workload processed at node i (column sum).
    double column_load(std::size_t i) const;
    /// Row sum including the cloud entry.
    double row_total(std::size_t j) const;
};

// --- closed-form quantities -------------------------------------------------

/// Watts per workload unit at the given processing rate: e*(w^S/x + w^D).
/// Strictly decreasing in x; undefined at x <= 0 (throws std::domain_error).
double power_efficiency(const PowerParams& p, double processed);

/// chi = w^S e / (eta_bar - e w^D), the largest rate a node can process while
/// staying under its efficiency cap. power_efficiency(p, chi) == eta_bar.
double capacity_chi(const PowerParams& p);

/// tau^u + tau^f: everything forwarded to the cloud.
double response_cloud_only(const NodeParams& n, double cloud_rtt);

/// tau^u + 1/(mu - lambda): everything processed locally. Requires lambda < mu.
double response_local_all(const NodeParams& n);

/// tau^u + alpha/(mu - alpha*lambda) + (1 - alpha)*tau^f for a local fraction
/// alpha in [0,1]. Requires alpha*lambda < mu.
double response_partial(const NodeParams& n, double alpha, double cloud_rtt);

/// Response time of node j under a cooperative allocation:
///   tau^u_j + (1/sum lambda) * sum_i phi_ji * (tau_ji + 1/(mu_i - load_i))
///          + (phi_jc / lambda_j) * tau^c.
/// Throws InstabilityError naming the overloaded node if any column load >= mu.
double coop_response(std::size_t j, const Allocation& a, const Scenario& s);

/// sum_j coop_response(j, a, s); the objective of the cooperative problem.
double coop_objective(const Allocation& a, const Scenario& s);

}  // namespace fogopt

#endif  // FOGOPT_MODEL_HPP_
