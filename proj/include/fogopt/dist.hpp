#ifndef FOGOPT_DIST_HPP_
#define FOGOPT_DIST_HPP_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fogopt/model.hpp"
#include "fogopt/trace.hpp"

namespace fogopt {

/// Multipliers for both distributed algorithms. The subgradient method keeps
/// one multiplier per row-equality constraint; ADMM keeps a scaled dual per
/// allocation entry (cloud column included).
struct DualState {
    std::vector<double> lambda_mult;  // length N
    Mat admm_dual;                    // N x (N+1)
    double rho = 1.0;
    double step_base = 1.0;           // subgradient step constant
};

/// What a fog-node agent is allowed to work with: its own parameters and
/// inbound RTTs (private), plus the broadcast arrival-rate data. Capacities
/// and power models of other nodes never appear here.
struct NodeLocalView {
    std::size_t index = 0;
    NodeParams self;
    double capacity = 0.0;              // own effective load cap (private)
    std::vector<double> inbound_rtt;    // tau_ki, k = 0..N-1
    std::vector<std::uint8_t> inbound_mask;  // coop_mask(k, index)
    std::vector<double> arrival_rates;  // lambda_k, broadcast by the WFC
    double total_arrival = 0.0;
    double cloud_rtt = 0.0;
};

NodeLocalView make_local_view(const Scenario& s, std::size_t i);

/// A service-column update: phi_{.i} plus the node's own cloud share.
struct ColumnUpdate {
    std::vector<double> service;  // length N
    double cloud = 0.0;
};

/// Agent i's dual-decomposition subproblem: minimize
///   S_i(phi_{.i}, phi_ic) - Lambda . phi_{.i} - Lambda_i phi_ic
/// over its capacity polyhedron, by projected gradient (unit-step gradient
/// mapping below 1e-8). The cloud share is linear and solved at an endpoint.
/// `warm` seeds the inner iteration.
ColumnUpdate node_subproblem_subgradient(const NodeLocalView& local,
                                         const std::vector<double>& duals,
                                         const ColumnUpdate* warm = nullptr);

/// Agent i's ADMM subproblem: S_i plus the scaled-dual proximal term
/// (rho/2)||phi_{.i} - psi_i + u_i||^2, same constraint set and inner solver.
ColumnUpdate node_subproblem_admm(const NodeLocalView& local,
                                  const std::vector<double>& psi_col, double psi_cloud,
                                  const std::vector<double>& dual_col, double dual_cloud,
                                  double rho, const ColumnUpdate* warm = nullptr);

/// Subgradient ascent on the dual with the diminishing step step_base/sqrt(t),
/// where row_residuals[j] = lambda_j - (sum_k phi_jk + phi_jc).
DualState dual_update_subgradient(const DualState& duals,
                                  const std::vector<double>& row_residuals, int t);

/// WFC step: project phi + dual onto the row-feasibility polytope
/// {psi >= 0, sum_k psi_jk + psi_jc = lambda_j}, row by row. `phi` and the
/// result are N x (N+1) with the cloud as the last column.
Mat wfc_psi_update(const Mat& phi, const Mat& dual, const Scenario& s);

struct SubgradientConfig {
    double step_base = 1.0;
    int max_iters = 500;
    double gap_tol = 1e-2;
    std::optional<double> oracle_objective;  // test mode: stop at relative gap
    // Coordinator-side primal recovery: re-split each node's traffic across the
    // current column loads at minimum forwarding cost (an exact transportation
    // step). Uses only data the coordinator already holds. Disable to recover
    // primal iterates purely by averaging + projection.
    bool transport_recovery = true;
};

struct AdmmConfig {
    double rho = 1.0;
    double eps_pri = 1e-6;
    double eps_dual = 1e-6;
    int max_iters = 200;
    double gap_tol = 1e-3;
    // Over-relaxation factor applied to the agents' iterate before the
    // consensus and dual updates; 1.0 recovers the plain scheme.
    double over_relaxation = 1.7;
    // Residual balancing: double/halve the penalty when one residual runs
    // ten times ahead of the other (relative to the iterate norms),
    // rescaling the scaled duals to match.
    bool adaptive_rho = true;
    // See SubgradientConfig::transport_recovery.
    bool transport_recovery = true;
    std::optional<double> oracle_objective;
};

enum class DistAlgorithm { subgradient, admm };

class TransportError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Reliable, per-sender-ordered message delivery between the agents and the
/// WFC. Implementations may fail by throwing TransportError.
class Transport {
 public:
    virtual ~Transport() = default;
    virtual void send(const Message& m) = 0;
    virtual Message receive(const std::string& receiver) = 0;
};

/// Default transport: in-process FIFO queues, one per receiver.
class InProcessTransport : public Transport {
 public:
    void send(const Message& m) override;
    Message receive(const std::string& receiver) override;

 private:
    std::map<std::string, std::deque<Message>> queues_;
};

struct ProtocolOptions {
    SubgradientConfig subgradient;
    AdmmConfig admm;
    /// Order in which agents are stepped each iteration; identity if empty.
    /// The result must not depend on it.
    std::vector<std::size_t> agent_order;
};

/// Runs the chosen algorithm with one logical agent per node plus one WFC,
/// bulk-synchronous, over `transport`. Trace records every message sent.
std::pair<Allocation, SolveTrace> run_protocol(Transport& transport, const Scenario& s,
                                               DistAlgorithm algo,
                                               const ProtocolOptions& opts = {});

/// Subgradient method with dual decomposition over the default transport.
/// Returns the best feasible primal found (projected running average /
/// projected iterate, whichever scored better).
std::pair<Allocation, SolveTrace> run_subgradient(const Scenario& s,
                                                  const SubgradientConfig& cfg = {});

/// Distributed ADMM via variable splitting over the default transport.
std::pair<Allocation, SolveTrace> run_admm_vs(const Scenario& s,
                                              const AdmmConfig& cfg = {});

}  // namespace fogopt

#endif  // FOGOPT_DIST_HPP_
