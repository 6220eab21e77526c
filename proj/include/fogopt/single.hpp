#ifndef FOGOPT_SINGLE_HPP_
#define FOGOPT_SINGLE_HPP_

#include <string>
#include <vector>

#include "fogopt/model.hpp"

namespace fogopt {

enum class Binding { interior, efficiency_cap, all_local, all_cloud };

const char* to_string(Binding b);

struct SingleSolution {
    double alpha_star = 0.0;       // optimal local fraction, in [0,1]
    double response_time = 0.0;    // seconds
    double efficiency_at_opt = 0.0; // watts per unit; limit value when alpha_star == 0
    Binding binding = Binding::interior;
};

/// Minimizes the partial-offload response time over the feasible local
/// fraction by golden-section search (the objective is convex), to absolute
/// alpha tolerance 1e-9. Per-unit power falls as the local load grows, so the
/// efficiency cap eta_bar translates into a floor chi/lambda on the local
/// share; the feasible interval is [min(chi/lambda, a_hi), a_hi] with
/// a_hi = min(1, (1-eps)*mu/lambda). If even full local processing cannot
/// reach chi the floor is clamped to a_hi and efficiency_at_opt reports the
/// achieved (over-cap) value. This is the authoritative single-node solver.
SingleSolution optimal_alpha_numeric(const NodeParams& n, double cloud_rtt);

/// The published piecewise closed form for the optimal local fraction,
/// evaluated exactly as printed and clamped to [0,1]. Its branch conditions
/// are dubious (see closed_form_branch notes in the tests), so this exists
/// for cross-checking, not as the solver of record.
/// Throws std::domain_error if the square-root branch has a negative radicand.
double closed_form_alpha(const NodeParams& n, double cloud_rtt);

/// Which branch closed_form_alpha takes for these parameters (1, 2 or 3).
int closed_form_branch(const NodeParams& n, double cloud_rtt);

struct TradeoffPoint {
    double eta_cap = 0.0;
    double alpha_star = 0.0;
    double response_time = 0.0;
    bool skipped = false;      // grid value did not admit a valid power model
    std::string warning;
};

/// One solve per efficiency-cap grid value, with the node's eta_bar
/// overridden. Response time is non-increasing as the cap relaxes.
std::vector<TradeoffPoint> tradeoff_curve(const NodeParams& n, double cloud_rtt,
                                          const std::vector<double>& eta_grid);

}  // namespace fogopt

#endif  // FOGOPT_SINGLE_HPP_
