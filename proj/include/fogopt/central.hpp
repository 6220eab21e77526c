#ifndef FOGOPT_CENTRAL_HPP_
#define FOGOPT_CENTRAL_HPP_

#include <cstddef>
#include <utility>
#include <vector>

#include "fogopt/model.hpp"
#include "fogopt/trace.hpp"

namespace fogopt {

struct FeasibilityReport {
    std::vector<double> row_residuals;  // sum_k phi_jk + phi_jc - lambda_j
    std::vector<double> column_slacks;  // c_i - sum_k phi_ki
    int bound_violations = 0;           // negative entries, per-entry bounds, mask zeros
    bool feasible = false;              // at tolerance 1e-6
};

FeasibilityReport check_feasibility(const Allocation& a, const Scenario& s);

/// Restores feasibility of an arbitrary iterate: zeroes masked-out entries,
/// then alternates per-row simplex projection (cloud entry included as slack)
/// with per-column capacity scaling until the joint residual is <= 1e-9.
/// Idempotent on feasible input.
Allocation project_feasible(const Allocation& a, const Scenario& s);

/// Joint feasibility residual: max of |row residual| and column cap excess.
double feasibility_residual(const Allocation& a, const Scenario& s);

/// Objective gradient at a feasible point; cloud part in grad_cloud.
void coop_gradient(const Allocation& a, const Scenario& s, Mat& grad,
                   std::vector<double>& grad_cloud);

/// Ground-truth solver for the cooperative problem: projected gradient with
/// backtracking line search over the feasible polyhedron. Deterministic for a
/// given scenario. `tol` is the relative objective tolerance used for the
/// stopping rule. Throws SolveError (with trace) if max_iters is exhausted
/// before the iterates settle.
std::pair<Allocation, SolveTrace> solve_centralized(const Scenario& s,
                                                    double tol = 1e-9,
                                                    int max_iters = 100000);

}  // namespace fogopt

#endif  // FOGOPT_CENTRAL_HPP_
