#include "fogopt/model.hpp"

#include <cmath>
#include <stdexcept>

namespace fogopt {

PowerParams::PowerParams(double pue_, double static_power_,
                         double dynamic_power_per_unit_, double efficiency_cap_)
    : pue(pue_), static_power(static_power_),
      dynamic_power_per_unit(dynamic_power_per_unit_), efficiency_cap(efficiency_cap_) {
    if (!(pue >= 1.0))
        throw std::invalid_argument("PowerParams: pue must be >= 1");
    if (!(static_power >= 0.0))
        throw std::invalid_argument("PowerParams: static_power must be >= 0");
    if (!(dynamic_power_per_unit >= 0.0))
        throw std::invalid_argument("PowerParams: dynamic_power_per_unit must be >= 0");
    if (!(efficiency_cap > pue * dynamic_power_per_unit))
        throw std::invalid_argument(
            "PowerParams: efficiency_cap must exceed pue * dynamic_power_per_unit");
}

NodeParams::NodeParams(std::string id_, double arrival_rate_, double service_rate_,
                       double user_rtt_, PowerParams power_)
    : id(std::move(id_)), arrival_rate(arrival_rate_), service_rate(service_rate_),
      user_rtt(user_rtt_), power(power_) {
    if (!(arrival_rate > 0.0))
        throw std::invalid_argument("NodeParams " + id + ": arrival_rate must be > 0");
    if (!(service_rate > 0.0))
        throw std::invalid_argument("NodeParams " + id + ": service_rate must be > 0");
    if (!(user_rtt >= 0.0))
        throw std::invalid_argument("NodeParams " + id + ": user_rtt must be >= 0");
}

double Scenario::total_arrival() const {
    double s = 0.0;
    for (const auto& n : nodes) s += n.arrival_rate;
    return s;
}

double Scenario::effective_capacity(std::size_t i) const {
    const NodeParams& n = nodes[i];
    return std::min(capacity_chi(n.power), (1.0 - kStabilityMargin) * n.service_rate);
}

void Scenario::validate() const {
    const std::size_t n = nodes.size();
    if (n == 0) throw std::invalid_argument("Scenario: empty node set");
    if (inter_rtt.rows() != n || inter_rtt.cols() != n)
        throw std::invalid_argument("Scenario: inter_rtt must be N x N");
    if (coop_mask.rows() != n || coop_mask.cols() != n)
        throw std::invalid_argument("Scenario: coop_mask must be N x N");
    if (!(deadline > 0.0)) throw std::invalid_argument("Scenario: deadline must be > 0");
    if (!(cloud_rtt >= 0.0)) throw std::invalid_argument("Scenario: cloud_rtt must be >= 0");
    for (std::size_t j = 0; j < n; ++j) {
        if (inter_rtt(j, j) != 0.0)
            throw std::invalid_argument("Scenario: inter_rtt diagonal must be zero");
        if (!coop_mask(j, j))
            throw std::invalid_argument("Scenario: coop_mask diagonal must be true");
        for (std::size_t i = 0; i < n; ++i) {
            if (!(inter_rtt(j, i) >= 0.0))
                throw std::invalid_argument("Scenario: inter_rtt must be nonnegative");
            if (inter_rtt(j, i) != inter_rtt(i, j))
                throw std::invalid_argument("Scenario: inter_rtt must be symmetric");
        }
    }
}

Allocation Allocation::zeros(std::size_t n) {
    Allocation a;
    a.phi = Mat(n, n, 0.0);
    a.phi_cloud.assign(n, 0.0);
    return a;
}

Allocation Allocation::all_cloud(const Scenario& s) {
    Allocation a = zeros(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) a.phi_cloud[j] = s.nodes[j].arrival_rate;
    return a;
}

double Allocation::column_load(std::size_t i) const {
    double l = 0.0;
    for (std::size_t k = 0; k < phi.rows(); ++k) l += phi(k, i);
    return l;
}

double Allocation::row_total(std::size_t j) const {
    double t = phi_cloud[j];
    for (std::size_t i = 0; i < phi.cols(); ++i) t += phi(j, i);
    return t;
}

double power_efficiency(const PowerParams& p, double processed) {
    if (!(processed > 0.0))
        throw std::domain_error("power_efficiency: processed workload must be > 0");
    return p.pue * (p.static_power / processed + p.dynamic_power_per_unit);
}

double capacity_chi(const PowerParams& p) {
    return p.static_power * p.pue /
           (p.efficiency_cap - p.pue * p.dynamic_power_per_unit);
}

double response_cloud_only(const NodeParams& n, double cloud_rtt) {
    return n.user_rtt + cloud_rtt;
}

double response_local_all(const NodeParams& n) {
    if (!(n.arrival_rate < n.service_rate))
        throw InstabilityError("response_local_all: lambda >= mu", n.id);
    return n.user_rtt + 1.0 / (n.service_rate - n.arrival_rate);
}

double response_partial(const NodeParams& n, double alpha, double cloud_rtt) {
    if (alpha < 0.0 || alpha > 1.0)
        throw std::domain_error("response_partial: alpha must be in [0,1]");
    const double local = alpha * n.arrival_rate;
    if (!(local < n.service_rate))
        throw InstabilityError("response_partial: alpha*lambda >= mu", n.id);
    return n.user_rtt + alpha / (n.service_rate - local) + (1.0 - alpha) * cloud_rtt;
}

namespace {

// Column loads, throwing if any node's queue would be unstable.
std::vector<double> stable_loads(const Allocation& a, const Scenario& s) {
    std::vector<double> loads(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        loads[i] = a.column_load(i);
        if (!(loads[i] < s.nodes[i].service_rate))
            throw InstabilityError("column load >= mu", s.nodes[i].id);
    }
    return loads;
}

double response_with_loads(std::size_t j, const Allocation& a, const Scenario& s,
                           const std::vector<double>& loads, double total_arrival) {
    const NodeParams& nj = s.nodes[j];
    double queue_term = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double phi_ji = a.phi(j, i);
        if (phi_ji == 0.0) continue;
        queue_term += phi_ji * (s.inter_rtt(j, i) +
                                1.0 / (s.nodes[i].service_rate - loads[i]));
    }
    return nj.user_rtt + queue_term / total_arrival +
           (a.phi_cloud[j] / nj.arrival_rate) * s.cloud_rtt;
}

}  // namespace

double coop_response(std::size_t j, const Allocation& a, const Scenario& s) {
    return response_with_loads(j, a, s, stable_loads(a, s), s.total_arrival());
}

double coop_objective(const Allocation& a, const Scenario& s) {
    const auto loads = stable_loads(a, s);
    const double total = s.total_arrival();
    double obj = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j)
        obj += response_with_loads(j, a, s, loads, total);
    return obj;
}

}  // namespace fogopt
