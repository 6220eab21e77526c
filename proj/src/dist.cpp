#include "fogopt/dist.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>

#include "fogopt/central.hpp"
#include "fogopt/projection.hpp"

namespace fogopt {

namespace {

constexpr double kInnerTol = 1e-8;
constexpr int kInnerMaxIters = 200000;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

// Both node subproblems have the shape
//   min sum_k q_k(x_k) + h(sum_k x_k)   over {0 <= x_k <= ub_k, sum x <= cap}
// with q_k linear (subgradient duals) or quadratic (ADMM prox) and h the
// convex congestion cost of the column load. Plain projected gradient crawls
// along the flat constant-load faces here, so we solve the split form
// exactly: an allocation oracle for a fixed load s, then a golden-section
// search over s.

// min sum c_k x_k subject to sum x = s, 0 <= x <= ub: fill cheapest first.
// `by_cost` is the index order sorted ascending by c.
void fill_greedy(std::vector<double>& x, const std::vector<std::size_t>& by_cost,
                 const std::vector<double>& ub, double s) {
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t k : by_cost) {
        if (s <= 0.0) break;
        x[k] = std::min(ub[k], s);
        s -= x[k];
    }
}

// min sum [c_k x_k + (rho/2)(x_k - t_k)^2] subject to sum x = s, 0 <= x <= ub:
// threshold form x_k = clamp(t_k - (c_k + theta)/rho, 0, ub_k), bisect theta.
void fill_prox(std::vector<double>& x, const std::vector<double>& c,
               const std::vector<double>& t, double rho,
               const std::vector<double>& ub, double s) {
    const std::size_t n = x.size();
    auto total = [&](double theta) {
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            sum += std::clamp(t[k] - (c[k] + theta) / rho, 0.0, ub[k]);
        return sum;
    };
    double span = 1.0;
    for (std::size_t k = 0; k < n; ++k)
        span = std::max({span, std::fabs(c[k]), rho * (std::fabs(t[k]) + ub[k])});
    double lo = -2.0 * span, hi = 2.0 * span;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (total(mid) > s) lo = mid;
        else hi = mid;
    }
    const double theta = 0.5 * (lo + hi);
    for (std::size_t k = 0; k < n; ++k)
        x[k] = std::clamp(t[k] - (c[k] + theta) / rho, 0.0, ub[k]);
    // Repair the residual rounding on unsaturated coordinates.
    double diff = s;
    for (double v : x) diff -= v;
    for (std::size_t k = 0; k < n && std::fabs(diff) > 0.0; ++k) {
        const double nx = std::clamp(x[k] + diff, 0.0, ub[k]);
        diff -= nx - x[k];
        x[k] = nx;
    }
}

double golden_load(double lo, double hi, const std::function<double(double)>& f) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    const double tol = 1e-12 * std::max(1.0, hi);
    while (b - a > tol) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

NodeLocalView make_local_view(const Scenario& s, std::size_t i) {
    NodeLocalView v;
    v.index = i;
    v.self = s.nodes[i];
    v.capacity = s.effective_capacity(i);
    const std::size_t n = s.size();
    v.inbound_rtt.resize(n);
    v.inbound_mask.resize(n);
    v.arrival_rates.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        v.inbound_rtt[k] = s.inter_rtt(k, i);
        v.inbound_mask[k] = s.coop_mask(k, i) ? 1 : 0;
        v.arrival_rates[k] = s.nodes[k].arrival_rate;
    }
    v.total_arrival = s.total_arrival();
    v.cloud_rtt = s.cloud_rtt;
    return v;
}

namespace {

std::vector<double> column_bounds(const NodeLocalView& local) {
    std::vector<double> ub(local.arrival_rates.size());
    for (std::size_t k = 0; k < ub.size(); ++k)
        ub[k] = local.inbound_mask[k] ? local.arrival_rates[k] : 0.0;
    return ub;
}

double queue_term(const NodeLocalView& local, double load) {
    return load / (local.self.service_rate - load) / local.total_arrival;
}

double queue_term_deriv(const NodeLocalView& local, double load) {
    const double slack = local.self.service_rate - load;
    return local.self.service_rate / (slack * slack) / local.total_arrival;
}

}  // namespace

ColumnUpdate node_subproblem_subgradient(const NodeLocalView& local,
                                         const std::vector<double>& duals,
                                         const ColumnUpdate* warm) {
    (void)warm;  // the exact solve needs no seed
    const std::size_t n = local.arrival_rates.size();
    const auto ub = column_bounds(local);

    std::vector<double> cost(n);
    for (std::size_t k = 0; k < n; ++k)
        cost[k] = local.inbound_rtt[k] / local.total_arrival - duals[k];
    std::vector<std::size_t> by_cost(n);
    std::iota(by_cost.begin(), by_cost.end(), 0);
    std::stable_sort(by_cost.begin(), by_cost.end(),
                     [&](std::size_t a, std::size_t b) { return cost[a] < cost[b]; });

    double s_max = 0.0;
    for (double v : ub) s_max += v;
    s_max = std::min(s_max, local.capacity);

    std::vector<double> x(n, 0.0);
    const auto objective = [&](double s) {
        fill_greedy(x, by_cost, ub, s);
        double val = queue_term(local, s);
        for (std::size_t k = 0; k < n; ++k) val += cost[k] * x[k];
        return val;
    };
    const double s_star = s_max > 0.0 ? golden_load(0.0, s_max, objective) : 0.0;

    ColumnUpdate out;
    fill_greedy(x, by_cost, ub, s_star);
    out.service = x;
    // Linear in the cloud share: take the minimizing endpoint.
    const double cloud_grad =
        local.cloud_rtt / local.self.arrival_rate - duals[local.index];
    out.cloud = cloud_grad < 0.0 ? local.self.arrival_rate : 0.0;
    return out;
}

ColumnUpdate node_subproblem_admm(const NodeLocalView& local,
                                  const std::vector<double>& psi_col, double psi_cloud,
                                  const std::vector<double>& dual_col, double dual_cloud,
                                  double rho, const ColumnUpdate* warm) {
    const std::size_t n = local.arrival_rates.size();
    const auto ub = column_bounds(local);

    std::vector<double> cost(n), target(n);
    for (std::size_t k = 0; k < n; ++k) {
        cost[k] = local.inbound_rtt[k] / local.total_arrival;
        target[k] = psi_col[k] - dual_col[k];
    }

    if (rho <= 0.0) {
        // Degenerates to the dual-free minimization of S_i over the polyhedron.
        return node_subproblem_subgradient(local, std::vector<double>(n, 0.0), warm);
    }

    double s_max = 0.0;
    for (double v : ub) s_max += v;
    s_max = std::min(s_max, local.capacity);

    std::vector<double> x(n, 0.0);
    const auto objective = [&](double s) {
        fill_prox(x, cost, target, rho, ub, s);
        double val = queue_term(local, s);
        for (std::size_t k = 0; k < n; ++k) {
            const double d = x[k] - target[k];
            val += cost[k] * x[k] + 0.5 * rho * d * d;
        }
        return val;
    };
    const double s_star = s_max > 0.0 ? golden_load(0.0, s_max, objective) : 0.0;

    ColumnUpdate out;
    fill_prox(x, cost, target, rho, ub, s_star);
    out.service = x;
    // Cloud share: scalar quadratic prox plus the linear cloud latency cost.
    out.cloud = std::clamp(
        psi_cloud - dual_cloud - local.cloud_rtt / (rho * local.self.arrival_rate),
        0.0, local.self.arrival_rate);
    return out;
}

DualState dual_update_subgradient(const DualState& duals,
                                  const std::vector<double>& row_residuals, int t) {
    DualState next = duals;
    const double step = duals.step_base / std::sqrt(static_cast<double>(t));
    for (std::size_t j = 0; j < row_residuals.size(); ++j)
        next.lambda_mult[j] += step * row_residuals[j];
    return next;
}

namespace {

Mat psi_projection(const Mat& phi, const Mat& dual, const std::vector<double>& lambda,
                   const BoolMat& mask) {
    const std::size_t n = lambda.size();
    Mat psi(n, n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> v;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask(j, i)) {
                v.push_back(phi(j, i) + dual(j, i));
                idx.push_back(i);
            }
        }
        v.push_back(phi(j, n) + dual(j, n));
        project_simplex(v, lambda[j]);
        for (std::size_t t = 0; t < idx.size(); ++t) psi(j, idx[t]) = v[t];
        psi(j, n) = v.back();
    }
    return psi;
}

}  // namespace

Mat wfc_psi_update(const Mat& phi, const Mat& dual, const Scenario& s) {
    std::vector<double> lambda(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) lambda[j] = s.nodes[j].arrival_rate;
    return psi_projection(phi, dual, lambda, s.coop_mask);
}

void InProcessTransport::send(const Message& m) { queues_[m.receiver].push_back(m); }

Message InProcessTransport::receive(const std::string& receiver) {
    auto& q = queues_[receiver];
    if (q.empty()) throw TransportError("no message pending for " + receiver);
    Message m = std::move(q.front());
    q.pop_front();
    return m;
}

namespace {

constexpr const char* kWfc = "wfc";

std::string agent_name(std::size_t i) { return "agent" + std::to_string(i); }

std::size_t agent_index(const std::string& name) {
    return static_cast<std::size_t>(std::stoul(name.substr(5)));
}

struct Harness {
    Transport& transport;
    SolveTrace trace;

    void send(Message m) {
        try {
            transport.send(m);
        } catch (const TransportError& e) {
            throw SolveError(std::string("transport failure: ") + e.what(), trace);
        }
        trace.transcript.push_back(std::move(m));
    }

    Message receive(const std::string& who) {
        try {
            return transport.receive(who);
        } catch (const TransportError& e) {
            throw SolveError(std::string("transport failure: ") + e.what(), trace);
        }
    }
};

Allocation allocation_from(const Mat& full, std::size_t n) {
    Allocation a = Allocation::zeros(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) a.phi(j, i) = full(j, i);
        a.phi_cloud[j] = full(j, n);
    }
    return a;
}

double frob_diff(const Mat& a, const Mat& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a.data()[k] - b.data()[k];
        s += d * d;
    }
    return std::sqrt(s);
}

double frob(const Mat& a) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a.data()[k] * a.data()[k];
    return std::sqrt(s);
}

// Minimum-cost flow by successive shortest paths (Bellman-Ford on the
// residual graph). Sizes here are tiny (≤ ~2N+3 vertices), so the simple
// label-correcting search is plenty.
struct MinCostFlow {
    struct Arc {
        std::size_t to;
        double cap;
        double cost;
        std::size_t rev;
    };
    std::vector<std::vector<Arc>> g;

    explicit MinCostFlow(std::size_t vertices) : g(vertices) {}

    void add(std::size_t from, std::size_t to, double cap, double cost) {
        g[from].push_back({to, cap, cost, g[to].size()});
        g[to].push_back({from, 0.0, -cost, g[from].size() - 1});
    }

    // Pushes up to `want` units from s to t at minimum cost; returns the
    // amount actually sent.
    double solve(std::size_t s, std::size_t t, double want) {
        const double eps = 1e-9 * std::max(1.0, want);
        double sent = 0.0;
        while (want - sent > eps) {
            const std::size_t nv = g.size();
            std::vector<double> dist(nv, std::numeric_limits<double>::infinity());
            std::vector<std::size_t> pv(nv, nv), pe(nv, 0);
            dist[s] = 0.0;
            for (std::size_t round = 0; round + 1 < nv; ++round) {
                bool changed = false;
                for (std::size_t v = 0; v < nv; ++v) {
                    if (!std::isfinite(dist[v])) continue;
                    for (std::size_t e = 0; e < g[v].size(); ++e) {
                        const Arc& a = g[v][e];
                        if (a.cap <= eps) continue;
                        if (dist[v] + a.cost < dist[a.to] - 1e-15) {
                            dist[a.to] = dist[v] + a.cost;
                            pv[a.to] = v;
                            pe[a.to] = e;
                            changed = true;
                        }
                    }
                }
                if (!changed) break;
            }
            if (!std::isfinite(dist[t])) break;
            double push = want - sent;
            for (std::size_t v = t; v != s; v = pv[v])
                push = std::min(push, g[pv[v]][pe[v]].cap);
            for (std::size_t v = t; v != s; v = pv[v]) {
                Arc& a = g[pv[v]][pe[v]];
                a.cap -= push;
                g[a.to][a.rev].cap += push;
            }
            sent += push;
        }
        return sent;
    }
};

// WFC-side primal recovery: keep the per-node service loads the agents chose
// (column sums of the reported iterate) and re-split each origin row across
// nodes and cloud at minimum forwarding cost. Uses only coordinator-visible
// data: reported columns, arrival rates, RTTs, and the cooperation mask.
std::optional<Allocation> remix_rows(const Mat& full, const Scenario& s,
                                     const std::vector<double>& lambda,
                                     double total) {
    const std::size_t n = s.size();
    std::vector<double> load(n, 0.0);
    double load_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) load[i] += full(k, i);
        load_sum += load[i];
    }
    if (load_sum > total) {
        const double scale = total / load_sum;
        for (double& v : load) v *= scale;
        load_sum = total;
    }

    // Vertices: 0 = source, 1..n = origin rows, n+1..2n = serving nodes,
    // 2n+1 = cloud, 2n+2 = sink.
    const std::size_t src = 0, cloud = 2 * n + 1, sink = 2 * n + 2;
    MinCostFlow flow(2 * n + 3);
    const double inf_cap = 2.0 * total;
    for (std::size_t j = 0; j < n; ++j) {
        flow.add(src, 1 + j, lambda[j], 0.0);
        for (std::size_t i = 0; i < n; ++i)
            if (s.coop_mask(j, i))
                flow.add(1 + j, n + 1 + i, inf_cap, s.inter_rtt(j, i) / total);
        flow.add(1 + j, cloud, inf_cap, s.cloud_rtt / lambda[j]);
    }
    for (std::size_t i = 0; i < n; ++i)
        flow.add(n + 1 + i, sink, load[i], 0.0);
    flow.add(cloud, sink, total - load_sum, 0.0);

    const double sent = flow.solve(src, sink, total);
    if (sent < total - 1e-6 * std::max(1.0, total)) return std::nullopt;

    Allocation a = Allocation::zeros(n);
    for (std::size_t j = 0; j < n; ++j) {
        double row = 0.0;
        for (const auto& arc : flow.g[1 + j]) {
            if (arc.to >= n + 1 && arc.to <= 2 * n) {
                const double sentjk = inf_cap - arc.cap;
                a.phi(j, arc.to - n - 1) += sentjk;
                row += sentjk;
            } else if (arc.to == cloud) {
                const double sentjc = inf_cap - arc.cap;
                a.phi_cloud[j] += sentjc;
                row += sentjc;
            }
        }
        // Absorb the residual tolerance of the flow into the cloud entry so
        // the row constraint holds exactly.
        a.phi_cloud[j] = std::max(a.phi_cloud[j] + (lambda[j] - row), 0.0);
    }
    return a;
}

}  // namespace

std::pair<Allocation, SolveTrace> run_protocol(Transport& transport, const Scenario& s,
                                               DistAlgorithm algo,
                                               const ProtocolOptions& opts) {
    s.validate();
    const std::size_t n = s.size();
    const auto start_time = std::chrono::steady_clock::now();
    auto elapsed_ms = [&] {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_time)
            .count();
    };

    std::vector<std::size_t> order = opts.agent_order;
    if (order.empty()) {
        order.resize(n);
        std::iota(order.begin(), order.end(), 0);
    }

    Harness h{transport, {}};

    std::vector<NodeLocalView> views;
    views.reserve(n);
    for (std::size_t i = 0; i < n; ++i) views.push_back(make_local_view(s, i));
    std::vector<ColumnUpdate> warm(n);
    for (auto& w : warm) w.service.assign(n, 0.0);

    // Registration: each agent tells the WFC its arrival rate.
    std::vector<double> lambda(n, 0.0);
    for (std::size_t i : order)
        h.send({0, agent_name(i), kWfc, MessageKind::arrival_rate,
                {static_cast<double>(i), s.nodes[i].arrival_rate}});
    for (std::size_t i = 0; i < n; ++i) {
        const Message m = h.receive(kWfc);
        lambda[static_cast<std::size_t>(m.payload[0])] = m.payload[1];
    }
    const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);

    Allocation best = project_feasible(Allocation::all_cloud(s), s);
    double best_obj = coop_objective(best, s);

    auto finish = [&](Allocation result) {
        for (std::size_t i : order)
            h.send({-1, kWfc, agent_name(i), MessageKind::terminate, {}});
        return std::pair<Allocation, SolveTrace>{std::move(result), std::move(h.trace)};
    };

    if (algo == DistAlgorithm::subgradient) {
        const SubgradientConfig& cfg = opts.subgradient;
        DualState duals;
        duals.lambda_mult.assign(n, 0.0);
        duals.step_base = cfg.step_base;

        Mat avg(n, n + 1, 0.0);
        for (int t = 1; t <= cfg.max_iters; ++t) {
            // Broadcast: duals, arrival-rate vector, total arrival.
            std::vector<double> payload = duals.lambda_mult;
            payload.insert(payload.end(), lambda.begin(), lambda.end());
            payload.push_back(total);
            for (std::size_t i : order)
                h.send({t, kWfc, agent_name(i), MessageKind::dual_broadcast, payload});

            // Agents answer with their service columns and cloud shares.
            Mat full(n, n + 1, 0.0);
            for (std::size_t i : order) {
                const Message m = h.receive(agent_name(i));
                const std::vector<double> bcast_duals(m.payload.begin(),
                                                      m.payload.begin() + n);
                warm[i] = node_subproblem_subgradient(views[i], bcast_duals, &warm[i]);
                std::vector<double> reply = warm[i].service;
                reply.push_back(warm[i].cloud);
                reply.push_back(views[i].self.arrival_rate);
                h.send({t, agent_name(i), kWfc, MessageKind::service_vector, reply});
            }
            for (std::size_t c = 0; c < n; ++c) {
                const Message m = h.receive(kWfc);
                const std::size_t i = agent_index(m.sender);
                for (std::size_t k = 0; k < n; ++k) full(k, i) = m.payload[k];
                full(i, n) = m.payload[n];
            }

            std::vector<double> residual(n);
            for (std::size_t j = 0; j < n; ++j) {
                double row = full(j, n);
                for (std::size_t i = 0; i < n; ++i) row += full(j, i);
                residual[j] = lambda[j] - row;
            }
            const DualState prev = duals;
            duals = dual_update_subgradient(duals, residual, t);

            // Primal recovery: running average and the raw iterate, both
            // restored to feasibility; keep the better.
            const double w = 1.0 / static_cast<double>(t);
            for (std::size_t k = 0; k < avg.size(); ++k)
                avg.data()[k] += w * (full.data()[k] - avg.data()[k]);
            std::vector<Allocation> candidates;
            for (const Mat* cand_mat : {&avg, &full}) {
                candidates.push_back(
                    project_feasible(allocation_from(*cand_mat, n), s));
                if (cfg.transport_recovery)
                    if (auto remixed = remix_rows(*cand_mat, s, lambda, total))
                        candidates.push_back(std::move(*remixed));
            }
            for (Allocation& cand : candidates) {
                const double obj = coop_objective(cand, s);
                if (obj < best_obj) {
                    best_obj = obj;
                    best = std::move(cand);
                }
            }

            std::vector<double> dual_step(n);
            for (std::size_t j = 0; j < n; ++j)
                dual_step[j] = duals.lambda_mult[j] - prev.lambda_mult[j];
            h.trace.records.push_back({t, best_obj, norm2(residual), norm2(dual_step),
                                       norm2(duals.lambda_mult), elapsed_ms()});

            if (cfg.oracle_objective &&
                best_obj - *cfg.oracle_objective <=
                    cfg.gap_tol * std::fabs(*cfg.oracle_objective))
                return finish(best);
        }
        return finish(best);
    }

    // ADMM via variable splitting, scaled duals.
    const AdmmConfig& cfg = opts.admm;
    double rho = cfg.rho;
    Mat psi(n, n + 1, 0.0), u(n, n + 1, 0.0);
    // Local-first start: every node keeps its own arrivals. The WFC can build
    // this from the registered rates alone, and it is a far better reference
    // than all-cloud whenever local processing carries most of the load.
    for (std::size_t j = 0; j < n; ++j) psi(j, j) = lambda[j];

    for (int t = 1; t <= cfg.max_iters; ++t) {
        for (std::size_t i : order) {
            std::vector<double> payload;
            payload.reserve(2 * n + 2 + n + 1);
            for (std::size_t k = 0; k < n; ++k) payload.push_back(psi(k, i));
            payload.push_back(psi(i, n));
            for (std::size_t k = 0; k < n; ++k) payload.push_back(u(k, i));
            payload.push_back(u(i, n));
            payload.insert(payload.end(), lambda.begin(), lambda.end());
            payload.push_back(total);
            h.send({t, kWfc, agent_name(i), MessageKind::psi_slice, payload});
        }

        Mat full(n, n + 1, 0.0);
        for (std::size_t i : order) {
            const Message m = h.receive(agent_name(i));
            std::vector<double> psi_col(m.payload.begin(), m.payload.begin() + n);
            const double psi_cloud = m.payload[n];
            std::vector<double> u_col(m.payload.begin() + n + 1,
                                      m.payload.begin() + 2 * n + 1);
            const double u_cloud = m.payload[2 * n + 1];
            warm[i] = node_subproblem_admm(views[i], psi_col, psi_cloud, u_col,
                                           u_cloud, rho, &warm[i]);
            std::vector<double> reply = warm[i].service;
            reply.push_back(warm[i].cloud);
            reply.push_back(views[i].self.arrival_rate);
            h.send({t, agent_name(i), kWfc, MessageKind::service_vector, reply});
        }
        for (std::size_t c = 0; c < n; ++c) {
            const Message m = h.receive(kWfc);
            const std::size_t i = agent_index(m.sender);
            for (std::size_t k = 0; k < n; ++k) full(k, i) = m.payload[k];
            full(i, n) = m.payload[n];
        }

        const Mat psi_prev = psi;
        Mat relaxed(n, n + 1, 0.0);
        const double alpha = cfg.over_relaxation;
        for (std::size_t k = 0; k < relaxed.size(); ++k)
            relaxed.data()[k] =
                alpha * full.data()[k] + (1.0 - alpha) * psi.data()[k];
        psi = psi_projection(relaxed, u, lambda, s.coop_mask);
        for (std::size_t k = 0; k < u.size(); ++k)
            u.data()[k] += relaxed.data()[k] - psi.data()[k];

        const double pri = frob_diff(full, psi);
        const double dual_res = rho * frob_diff(psi, psi_prev);

        Allocation cand = project_feasible(allocation_from(psi, n), s);
        double obj = coop_objective(cand, s);
        if (cfg.transport_recovery) {
            if (auto remixed = remix_rows(full, s, lambda, total)) {
                const double robj = coop_objective(*remixed, s);
                if (robj < obj) {
                    obj = robj;
                    cand = std::move(*remixed);
                }
            }
        }
        if (obj < best_obj) {
            best_obj = obj;
            best = cand;
        }
        h.trace.records.push_back(
            {t, obj, pri, dual_res, rho * frob(u), elapsed_ms()});

        if (pri <= cfg.eps_pri && dual_res <= cfg.eps_dual) return finish(cand);
        if (cfg.oracle_objective &&
            obj - *cfg.oracle_objective <=
                cfg.gap_tol * std::fabs(*cfg.oracle_objective))
            return finish(cand);

        if (cfg.adaptive_rho) {
            // Compare the residuals on their own scales: the primal residual
            // lives in workload units, the dual residual in cost units.
            const double pri_rel =
                pri / std::max(1e-12, std::max(frob(full), frob(psi)));
            const double dual_rel = dual_res / std::max(1e-12, rho * frob(u));
            if (pri_rel > 10.0 * dual_rel) {
                rho *= 2.0;
                for (std::size_t k = 0; k < u.size(); ++k) u.data()[k] *= 0.5;
            } else if (dual_rel > 10.0 * pri_rel) {
                rho *= 0.5;
                for (std::size_t k = 0; k < u.size(); ++k) u.data()[k] *= 2.0;
            }
        }
    }
    throw SolveError("run_admm_vs: iteration budget exhausted", h.trace);
}

std::pair<Allocation, SolveTrace> run_subgradient(const Scenario& s,
                                                  const SubgradientConfig& cfg) {
    InProcessTransport transport;
    ProtocolOptions opts;
    opts.subgradient = cfg;
    return run_protocol(transport, s, DistAlgorithm::subgradient, opts);
}

std::pair<Allocation, SolveTrace> run_admm_vs(const Scenario& s, const AdmmConfig& cfg) {
    InProcessTransport transport;
    ProtocolOptions opts;
    opts.admm = cfg;
    return run_protocol(transport, s, DistAlgorithm::admm, opts);
}

}  // namespace fogopt
