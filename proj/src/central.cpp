#include "fogopt/central.hpp"

#include <algorithm>
#include <cmath>

#include "fogopt/projection.hpp"

namespace fogopt {

namespace {

constexpr double kFeasTol = 1e-6;
constexpr double kProjTol = 1e-9;

// Project row j of `a` (masked fog entries plus the cloud slack) onto
// {x >= 0, sum(x) = lambda_j}.
void project_row(Allocation& a, const Scenario& s, std::size_t j) {
    const std::size_t n = s.size();
    std::vector<double> v;
    std::vector<std::size_t> idx;
    v.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (s.coop_mask(j, i)) {
            v.push_back(a.phi(j, i));
            idx.push_back(i);
        }
    }
    v.push_back(a.phi_cloud[j]);
    project_simplex(v, s.nodes[j].arrival_rate);
    for (std::size_t t = 0; t < idx.size(); ++t) a.phi(j, idx[t]) = v[t];
    a.phi_cloud[j] = v.back();
}

// Projection onto one column's capacity set {x >= 0, sum(x) <= cap}.
void project_column(std::vector<double>& v, double cap) {
    double pos_sum = 0.0;
    for (double x : v) pos_sum += std::max(x, 0.0);
    if (pos_sum <= cap) {
        for (double& x : v) x = std::max(x, 0.0);
    } else {
        project_simplex(v, cap);
    }
}

}  // namespace

double feasibility_residual(const Allocation& a, const Scenario& s) {
    double r = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j)
        r = std::max(r, std::fabs(a.row_total(j) - s.nodes[j].arrival_rate));
    for (std::size_t i = 0; i < s.size(); ++i)
        r = std::max(r, a.column_load(i) - s.effective_capacity(i));
    return r;
}

FeasibilityReport check_feasibility(const Allocation& a, const Scenario& s) {
    const std::size_t n = s.size();
    FeasibilityReport rep;
    rep.row_residuals.resize(n);
    rep.column_slacks.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        rep.row_residuals[j] = a.row_total(j) - s.nodes[j].arrival_rate;
    for (std::size_t i = 0; i < n; ++i)
        rep.column_slacks[i] = s.effective_capacity(i) - a.column_load(i);
    for (std::size_t j = 0; j < n; ++j) {
        if (a.phi_cloud[j] < -kFeasTol) ++rep.bound_violations;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = a.phi(j, i);
            if (x < -kFeasTol || x > s.nodes[j].arrival_rate + kFeasTol)
                ++rep.bound_violations;
            else if (!s.coop_mask(j, i) && x > kFeasTol)
                ++rep.bound_violations;
        }
    }
    double max_row = 0.0, min_slack = 0.0;
    for (double r : rep.row_residuals) max_row = std::max(max_row, std::fabs(r));
    min_slack = *std::min_element(rep.column_slacks.begin(), rep.column_slacks.end());
    rep.feasible = max_row <= kFeasTol && min_slack >= -kFeasTol &&
                   rep.bound_violations == 0;
    return rep;
}

Allocation project_feasible(const Allocation& a, const Scenario& s) {
    // Dykstra's alternating projections between the row polytope (per-row
    // simplex with the cloud entry as slack) and the column capacity sets.
    // Plain alternation without the correction terms does not land on the
    // nearest point, which in turn stalls the projected-gradient oracle at
    // non-optimal fixed points.
    const std::size_t n = s.size();
    Allocation x = a;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (!s.coop_mask(j, i)) x.phi(j, i) = 0.0;

    Allocation p = Allocation::zeros(n), q = Allocation::zeros(n);
    std::vector<double> col(n);
    for (int sweep = 0; sweep < 20000; ++sweep) {
        // Row step on x + p.
        Allocation rowed = x;
        for (std::size_t j = 0; j < n; ++j) {
            rowed.phi_cloud[j] += p.phi_cloud[j];
            for (std::size_t i = 0; i < n; ++i) rowed.phi(j, i) += p.phi(j, i);
        }
        Allocation before = rowed;
        for (std::size_t j = 0; j < n; ++j) project_row(rowed, s, j);
        for (std::size_t j = 0; j < n; ++j) {
            p.phi_cloud[j] = before.phi_cloud[j] - rowed.phi_cloud[j];
            for (std::size_t i = 0; i < n; ++i)
                p.phi(j, i) = before.phi(j, i) - rowed.phi(j, i);
        }
        if (feasibility_residual(rowed, s) <= kProjTol) return rowed;

        // Column step on rowed + q.
        Allocation coled = rowed;
        for (std::size_t j = 0; j < n; ++j) {
            coled.phi_cloud[j] = std::max(coled.phi_cloud[j] + q.phi_cloud[j], 0.0);
            q.phi_cloud[j] = rowed.phi_cloud[j] + q.phi_cloud[j] - coled.phi_cloud[j];
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) col[k] = rowed.phi(k, i) + q.phi(k, i);
            std::vector<double> proj = col;
            project_column(proj, s.effective_capacity(i));
            for (std::size_t k = 0; k < n; ++k) {
                coled.phi(k, i) = proj[k];
                q.phi(k, i) = col[k] - proj[k];
            }
        }
        x = coled;
    }
    // Sweep budget exhausted (far-out inputs): repair the remaining row
    // deficits through the cloud column, which has no capacity limit. The
    // result is feasible, though no longer the nearest feasible point.
    for (std::size_t j = 0; j < n; ++j) {
        double row = x.phi_cloud[j];
        for (std::size_t i = 0; i < n; ++i) row += x.phi(j, i);
        const double deficit = s.nodes[j].arrival_rate - row;
        if (deficit > 0.0) {
            x.phi_cloud[j] += deficit;
        } else {
            project_row(x, s, j);
        }
    }
    return x;
}

void coop_gradient(const Allocation& a, const Scenario& s, Mat& grad,
                   std::vector<double>& grad_cloud) {
    const std::size_t n = s.size();
    const double total = s.total_arrival();
    grad = Mat(n, n, 0.0);
    grad_cloud.resize(n);
    std::vector<double> col_term(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double slack = s.nodes[i].service_rate - a.column_load(i);
        col_term[i] = 1.0 / slack + a.column_load(i) / (slack * slack);
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i)
            grad(j, i) = (s.inter_rtt(j, i) + col_term[i]) / total;
        grad_cloud[j] = s.cloud_rtt / s.nodes[j].arrival_rate;
    }
}

std::pair<Allocation, SolveTrace> solve_centralized(const Scenario& s, double tol,
                                                    int max_iters) {
    s.validate();
    const std::size_t n = s.size();
    SolveTrace trace;

    Allocation x = project_feasible(Allocation::all_cloud(s), s);
    double fx = coop_objective(x, s);
    Mat grad;
    std::vector<double> grad_cloud;
    double step = 1.0;

    // Keep trial points within a few arrival-rate scales of the feasible box;
    // far-out points make the projection needlessly expensive without buying
    // any extra progress (the projected displacement saturates anyway).
    double lam_max = 0.0;
    for (const auto& node : s.nodes) lam_max = std::max(lam_max, node.arrival_rate);

    // Window for the relative-progress stopping rule.
    std::vector<double> recent;
    const int window = 25;

    for (int it = 1; it <= max_iters; ++it) {
        coop_gradient(x, s, grad, grad_cloud);

        double grad_max = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            grad_max = std::max(grad_max, std::fabs(grad_cloud[j]));
            for (std::size_t i = 0; i < n; ++i)
                grad_max = std::max(grad_max, std::fabs(grad(j, i)));
        }
        if (grad_max > 0.0) step = std::min(step, 4.0 * lam_max / grad_max);

        // Backtracking on the projected step (Armijo, sigma = 1e-4).
        Allocation cand = x;
        double fcand = fx;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            cand = x;
            for (std::size_t j = 0; j < n; ++j) {
                cand.phi_cloud[j] -= step * grad_cloud[j];
                for (std::size_t i = 0; i < n; ++i)
                    cand.phi(j, i) -= step * grad(j, i);
            }
            cand = project_feasible(cand, s);
            double inner = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                inner += grad_cloud[j] * (cand.phi_cloud[j] - x.phi_cloud[j]);
                for (std::size_t i = 0; i < n; ++i)
                    inner += grad(j, i) * (cand.phi(j, i) - x.phi(j, i));
            }
            fcand = coop_objective(cand, s);
            if (fcand <= fx + 1e-4 * inner) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }

        double move = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            move = std::max(move, std::fabs(cand.phi_cloud[j] - x.phi_cloud[j]));
            for (std::size_t i = 0; i < n; ++i)
                move = std::max(move, std::fabs(cand.phi(j, i) - x.phi(j, i)));
        }

        if (accepted) {
            x = cand;
            fx = fcand;
            step = std::min(step * 1.5, 1e8);
        }

        trace.records.push_back({it, fx, feasibility_residual(x, s), move, 0.0, 0.0});

        recent.push_back(fx);
        if (static_cast<int>(recent.size()) > window) recent.erase(recent.begin());
        const bool settled =
            static_cast<int>(recent.size()) == window &&
            recent.front() - recent.back() <= tol * std::max(1e-30, std::fabs(fx));
        if ((move <= 1e-13 * (1.0 + std::fabs(fx))) || settled)
            return {x, trace};
    }
    throw SolveError("solve_centralized: iteration budget exhausted", trace);
}

}  // namespace fogopt
