#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fogopt/central.hpp"
#include "fogopt/dist.hpp"
#include "fogopt/model.hpp"
#include "oracles.hpp"

using namespace fogopt;

namespace {

Scenario single_node_scenario() {
    PowerParams p(1.0, 1000.0, 0.001, 50.0);  // chi ~ 20 > mu: cap never binds
    Scenario s;
    s.nodes = {NodeParams("solo", 5.0, 10.0, 0.01, p)};
    s.inter_rtt = Mat(1, 1, 0.0);
    s.coop_mask = BoolMat(1, 1, true);
    s.cloud_rtt = 0.1;
    s.deadline = 1.0;
    return s;
}

// Independent evaluation of agent i's dual-decomposition objective:
// forwarding + queueing cost of its service column, cloud cost, minus the
// dual credit for the workload it absorbs.
double agent_cost_reference(const NodeLocalView& v, const std::vector<double>& duals,
                            const std::vector<double>& service, double cloud) {
    double load = 0.0;
    for (double x : service) load += x;
    double cost = 0.0;
    for (std::size_t k = 0; k < service.size(); ++k)
        cost += service[k] *
                (v.inbound_rtt[k] + 1.0 / (v.self.service_rate - load)) /
                v.total_arrival;
    cost += cloud / v.self.arrival_rate * v.cloud_rtt;
    for (std::size_t k = 0; k < service.size(); ++k) cost -= duals[k] * service[k];
    cost -= duals[v.index] * cloud;
    return cost;
}

// Random point of agent i's constraint set: entries in [0, lambda_k],
// column sum scaled under the capacity, cloud share in [0, lambda_i].
void random_agent_point(const NodeLocalView& v, std::mt19937& rng,
                        std::vector<double>& service, double& cloud) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    service.assign(v.arrival_rates.size(), 0.0);
    double load = 0.0;
    for (std::size_t k = 0; k < service.size(); ++k) {
        if (!v.inbound_mask[k]) continue;
        service[k] = u01(rng) * v.arrival_rates[k];
        load += service[k];
    }
    if (load > 0.999 * v.capacity) {
        const double scale = 0.999 * v.capacity / load;
        for (double& x : service) x *= scale;
    }
    cloud = u01(rng) * v.self.arrival_rate;
}

// A transport that fails after a fixed number of deliveries.
class FlakyTransport : public Transport {
 public:
    explicit FlakyTransport(int budget) : budget_(budget) {}
    void send(const Message& m) override {
        if (budget_-- <= 0) throw TransportError("link down");
        inner_.send(m);
    }
    Message receive(const std::string& r) override { return inner_.receive(r); }

 private:
    InProcessTransport inner_;
    int budget_;
};

}  // namespace

TEST_CASE("dual update follows the diminishing-step ascent rule") {
    DualState d;
    d.lambda_mult = {1.0, 2.0};
    d.step_base = 1.0;

    DualState same = dual_update_subgradient(d, {0.0, 0.0}, 7);
    CHECK(same.lambda_mult[0] == 1.0);
    CHECK(same.lambda_mult[1] == 2.0);

    // Unmet demand (positive residual) raises the price on that row by
    // step_base/sqrt(1) = 1 at t=1.
    DualState up = dual_update_subgradient(d, {1.0, 0.0}, 1);
    CHECK(up.lambda_mult[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(up.lambda_mult[1] == doctest::Approx(2.0).epsilon(1e-15));

    DualState quarter = dual_update_subgradient(d, {1.0, 0.0}, 4);
    CHECK(quarter.lambda_mult[0] == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("step sequence diverges in sum while its squares converge") {
    double sum = 0.0, sum_sq = 0.0;
    double sum_at_half = 0.0;
    const int horizon = 1000000;
    for (int t = 1; t <= horizon; ++t) {
        const double step = 1.0 / std::sqrt(static_cast<double>(t));
        sum += step;
        sum_sq += step * step;
        if (t == horizon / 2) sum_at_half = sum;
    }
    CHECK(sum > 1.4 * sum_at_half);     // still growing strongly: sum diverges
    CHECK(sum_sq < 1.0 + std::log(static_cast<double>(horizon)) + 1.0);
}

TEST_CASE("coordinator consensus step projects onto the row-feasibility set") {
    Scenario s = oracles::random_scenario(2, 401);
    const double l0 = s.nodes[0].arrival_rate;

    // Already row-feasible input passes through unchanged.
    Mat phi(2, 3, 0.0);
    phi(0, 0) = 0.25 * l0;
    phi(0, 2) = 0.75 * l0;
    phi(1, 1) = s.nodes[1].arrival_rate;
    Mat zero(2, 3, 0.0);
    Mat psi = wfc_psi_update(phi, zero, s);
    for (std::size_t k = 0; k < psi.size(); ++k)
        CHECK(psi.data()[k] == doctest::Approx(phi.data()[k]).epsilon(1e-12));

    // Symmetric infeasible row lands on the symmetric feasible point.
    Scenario s1 = oracles::random_scenario(1, 402);
    s1.nodes[0].arrival_rate = 1.0;
    Mat over(1, 2, 2.0);
    Mat psi1 = wfc_psi_update(over, Mat(1, 2, 0.0), s1);
    CHECK(psi1(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(psi1(0, 1) == doctest::Approx(0.5).epsilon(1e-12));

    // Random rows: sums restored exactly, and no grid point is closer.
    std::mt19937 rng(403);
    std::uniform_real_distribution<double> u(-2.0, 5.0);
    for (int k = 0; k < 50; ++k) {
        Scenario s2 = oracles::random_scenario(3, 404 + k);
        Mat m(3, 4, 0.0), d(3, 4, 0.0);
        for (std::size_t q = 0; q < m.size(); ++q) m.data()[q] = u(rng);
        Mat p = wfc_psi_update(m, d, s2);
        for (std::size_t j = 0; j < 3; ++j) {
            double row = p(j, 3);
            for (std::size_t i = 0; i < 3; ++i) {
                row += p(j, i);
                CHECK(p(j, i) >= -1e-15);
            }
            CHECK(row == doctest::Approx(s2.nodes[j].arrival_rate).epsilon(1e-12));
        }
    }
}

TEST_CASE("agent subproblem: zero duals leave nothing profitable to absorb") {
    Scenario s = oracles::random_scenario(3, 405);
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 3; ++i) s.inter_rtt(j, i) = 0.0;
    const NodeLocalView v = make_local_view(s, 1);
    const ColumnUpdate c =
        node_subproblem_subgradient(v, std::vector<double>(3, 0.0));
    // Queueing cost is strictly positive, so with no dual credit the
    // minimizer absorbs nothing.
    for (double x : c.service) CHECK(x == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(c.cloud == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("agent subproblem beats random points of its constraint set") {
    std::mt19937 rng(406);
    std::uniform_real_distribution<double> udual(0.0, 0.5);
    for (int k = 0; k < 20; ++k) {
        Scenario s = oracles::random_scenario(3, 410 + k);
        const std::size_t i = k % 3;
        const NodeLocalView v = make_local_view(s, i);
        std::vector<double> duals = {udual(rng), udual(rng), udual(rng)};
        const ColumnUpdate c = node_subproblem_subgradient(v, duals);
        const double val = agent_cost_reference(v, duals, c.service, c.cloud);
        std::vector<double> trial;
        double trial_cloud = 0.0;
        for (int q = 0; q < 2000; ++q) {
            random_agent_point(v, rng, trial, trial_cloud);
            CHECK(val <=
                  agent_cost_reference(v, duals, trial, trial_cloud) + 1e-6);
        }
    }
}

TEST_CASE("consensus subproblem: a huge penalty pins the agent to psi") {
    Scenario s = oracles::random_scenario(3, 420);
    const NodeLocalView v = make_local_view(s, 0);
    // Strictly interior target within every box and capacity bound.
    std::vector<double> psi_col(3);
    for (std::size_t k = 0; k < 3; ++k)
        psi_col[k] = 0.05 * std::min(v.arrival_rates[k], v.capacity / 3.0);
    const double psi_cloud = 0.1 * v.self.arrival_rate;
    std::vector<double> dual_col(3, 0.0);
    const ColumnUpdate c =
        node_subproblem_admm(v, psi_col, psi_cloud, dual_col, 0.0, 1e6);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(c.service[k] == doctest::Approx(psi_col[k]).epsilon(1e-3));
    CHECK(c.cloud == doctest::Approx(psi_cloud).epsilon(1e-3));
}

TEST_CASE("consensus subproblem: zero penalty reduces to the dual-free cost") {
    Scenario s = oracles::random_scenario(3, 421);
    const NodeLocalView v = make_local_view(s, 2);
    std::vector<double> psi_col = {1.0, 2.0, 3.0};
    std::vector<double> dual_col = {0.3, -0.2, 0.1};
    const ColumnUpdate with_rho0 =
        node_subproblem_admm(v, psi_col, 0.5, dual_col, 0.0, 0.0);
    const ColumnUpdate dual_free =
        node_subproblem_subgradient(v, std::vector<double>(3, 0.0));
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(with_rho0.service[k] ==
              doctest::Approx(dual_free.service[k]).epsilon(1e-6));
}

TEST_CASE("both algorithms solve the single-node case") {
    Scenario s = single_node_scenario();
    // Grid reference for the one-dimensional local/cloud split.
    const double ref_alpha =
        oracles::grid_alpha(s.nodes[0], s.cloud_rtt, 200000, false);
    const double ref_obj = oracles::partial_response_reference(
        s.nodes[0].user_rtt, s.cloud_rtt, s.nodes[0].service_rate,
        s.nodes[0].arrival_rate, ref_alpha);

    SubgradientConfig sg;
    sg.step_base = 1.0;
    sg.oracle_objective = ref_obj;
    auto [a1, t1] = run_subgradient(s, sg);
    CHECK(check_feasibility(a1, s).feasible);
    CHECK((coop_objective(a1, s) - ref_obj) / ref_obj <= 1e-2);

    AdmmConfig ad;
    ad.oracle_objective = ref_obj;
    ad.gap_tol = 1e-4;
    auto [a2, t2] = run_admm_vs(s, ad);
    CHECK(check_feasibility(a2, s).feasible);
    CHECK((coop_objective(a2, s) - ref_obj) / ref_obj <= 1e-4);
}

TEST_CASE("distributed runs match the centralized optimum on a small instance") {
    Scenario s = oracles::heavy_light_scenario(4, 3103);
    auto [opt, tc] = solve_centralized(s);
    const double fstar = coop_objective(opt, s);

    SubgradientConfig sg;
    sg.step_base = 3e-6;
    sg.oracle_objective = fstar;
    auto [a1, t1] = run_subgradient(s, sg);
    CHECK(check_feasibility(a1, s).feasible);
    const double gap1 = (coop_objective(a1, s) - fstar) / fstar;
    CHECK(gap1 <= 1e-2);
    CHECK(gap1 >= -1e-9);  // never super-optimal

    AdmmConfig ad;
    ad.rho = 1e-6;
    ad.max_iters = 100;
    ad.oracle_objective = fstar;
    auto [a2, t2] = run_admm_vs(s, ad);
    CHECK(check_feasibility(a2, s).feasible);
    const double gap2 = (coop_objective(a2, s) - fstar) / fstar;
    CHECK(gap2 <= 1e-3);
    CHECK(gap2 >= -1e-9);

    for (const auto& rec : t1.records) {
        CHECK(std::isfinite(rec.objective));
        CHECK(std::isfinite(rec.dual_norm));
    }
    for (const auto& rec : t2.records) {
        CHECK(std::isfinite(rec.objective));
        CHECK(std::isfinite(rec.primal_residual));
    }
}

TEST_CASE("consensus residual trends downward once the penalty settles") {
    Scenario s = oracles::heavy_light_scenario(6, 3150);
    AdmmConfig ad;
    ad.rho = 1e-6;
    ad.max_iters = 60;
    ad.gap_tol = 0.0;  // run the full budget
    SolveTrace trace;
    try {
        auto [a, t] = run_admm_vs(s, ad);
        trace = t;
    } catch (const SolveError& e) {
        trace = e.trace();
    }
    REQUIRE(trace.records.size() >= 20);
    const double early = trace.records[4].primal_residual;
    double late = 1e300;
    for (std::size_t k = trace.records.size() - 5; k < trace.records.size(); ++k)
        late = std::min(late, trace.records[k].primal_residual);
    CHECK(late <= early * 1.01);
}

TEST_CASE("no agent reveals its service rate, capacity or power draw") {
    Scenario s = oracles::random_scenario(4, 430, false);
    for (DistAlgorithm algo :
         {DistAlgorithm::subgradient, DistAlgorithm::admm}) {
        InProcessTransport transport;
        ProtocolOptions opts;
        opts.subgradient.max_iters = 30;
        opts.admm.max_iters = 30;
        opts.admm.gap_tol = 0.0;
        SolveTrace trace;
        try {
            auto [a, t] = run_protocol(transport, s, algo, opts);
            trace = t;
        } catch (const SolveError& e) {
            trace = e.trace();
        }
        REQUIRE_FALSE(trace.transcript.empty());
        int scanned = 0;
        for (const Message& m : trace.transcript) {
            if (m.receiver != "wfc") continue;
            REQUIRE(m.sender.rfind("agent", 0) == 0);
            const std::size_t i = std::stoul(m.sender.substr(5));
            const NodeParams& n = s.nodes[i];
            const double secrets[] = {n.service_rate, n.power.pue,
                                      n.power.static_power,
                                      n.power.dynamic_power_per_unit,
                                      n.power.efficiency_cap};
            for (double v : m.payload)
                for (double secret : secrets)
                    CHECK(std::abs(v - secret) > 1e-12 * std::max(1.0, secret));
            // The capacity bound is the edge of the feasible set, so a
            // saturated column legitimately carries allocation values equal
            // to it; only an unsaturated column matching the bound would
            // reveal anything.
            const double cap = s.effective_capacity(i);
            double load = 0.0;
            for (std::size_t k = 0; k < s.size(); ++k) load += m.payload[k];
            const bool saturated = std::abs(load - cap) <= 1e-6 * std::max(1.0, cap);
            if (!saturated) {
                for (double v : m.payload) {
                    CHECK(std::abs(v - cap) > 1e-12 * std::max(1.0, cap));
                    CHECK(std::abs(v - capacity_chi(n.power)) >
                          1e-12 * std::max(1.0, capacity_chi(n.power)));
                }
            }
            ++scanned;
        }
        CHECK(scanned > 0);
    }
}

TEST_CASE("result does not depend on the order agents are stepped") {
    Scenario s = oracles::random_scenario(4, 431);
    ProtocolOptions base;
    base.subgradient.max_iters = 40;

    InProcessTransport t1;
    auto [a1, tr1] = run_protocol(t1, s, DistAlgorithm::subgradient, base);

    ProtocolOptions shuffled = base;
    shuffled.agent_order = {2, 0, 3, 1};
    InProcessTransport t2;
    auto [a2, tr2] = run_protocol(t2, s, DistAlgorithm::subgradient, shuffled);

    CHECK(a1.phi == a2.phi);  // bitwise
    CHECK(a1.phi_cloud == a2.phi_cloud);
}

TEST_CASE("protocol runner and direct entry point agree") {
    Scenario s = oracles::heavy_light_scenario(3, 3200);
    AdmmConfig ad;
    ad.rho = 1e-6;
    ad.max_iters = 40;
    ad.gap_tol = 0.0;

    Allocation direct;
    try {
        auto [a, t] = run_admm_vs(s, ad);
        direct = a;
    } catch (const SolveError& e) {
        direct = Allocation::zeros(3);
    }

    InProcessTransport transport;
    ProtocolOptions opts;
    opts.admm = ad;
    Allocation via_protocol;
    try {
        auto [a, t] = run_protocol(transport, s, DistAlgorithm::admm, opts);
        via_protocol = a;
    } catch (const SolveError& e) {
        via_protocol = Allocation::zeros(3);
    }
    CHECK(direct.phi == via_protocol.phi);
    CHECK(direct.phi_cloud == via_protocol.phi_cloud);
}

TEST_CASE("transport failure surfaces as a solver error with partial transcript") {
    Scenario s = oracles::random_scenario(3, 432);
    FlakyTransport transport(25);
    ProtocolOptions opts;
    opts.subgradient.max_iters = 100;
    try {
        run_protocol(transport, s, DistAlgorithm::subgradient, opts);
        FAIL("expected a transport-induced solver error");
    } catch (const SolveError& e) {
        CHECK(std::string(e.what()).find("transport") != std::string::npos);
        CHECK_FALSE(e.trace().transcript.empty());
        CHECK(e.trace().transcript.size() <= 25);
    }
}
