#include "fogopt/single.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fogopt {

const char* to_string(Binding b) {
    switch (b) {
        case Binding::interior: return "interior";
        case Binding::efficiency_cap: return "efficiency_cap";
        case Binding::all_local: return "all_local";
        case Binding::all_cloud: return "all_cloud";
    }
    return "?";
}

namespace {

constexpr double kAlphaTol = 1e-9;

double golden_min(double lo, double hi, const auto& f) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > kAlphaTol) {
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

SingleSolution optimal_alpha_numeric(const NodeParams& n, double cloud_rtt) {
    const double chi = capacity_chi(n.power);
    const double stab = (1.0 - kStabilityMargin) * n.service_rate / n.arrival_rate;
    const double a_max = std::min(1.0, stab);
    // Per-unit power drops as the processed load grows, so the efficiency cap
    // is a floor on the local share: alpha * lambda >= chi. When even full
    // local processing cannot reach chi the cap is unattainable; the node runs
    // at its largest feasible share and the achieved efficiency is reported.
    const double a_min = std::min(chi / n.arrival_rate, a_max);

    const auto objective = [&](double alpha) {
        return response_partial(n, alpha, cloud_rtt);
    };

    double alpha = golden_min(a_min, a_max, objective);
    // Snap to the interval ends; golden section stops one bracket short.
    if (alpha - a_min < 10.0 * kAlphaTol && objective(a_min) <= objective(alpha))
        alpha = a_min;
    if (a_max - alpha < 10.0 * kAlphaTol && objective(a_max) <= objective(alpha))
        alpha = a_max;

    SingleSolution sol;
    sol.alpha_star = alpha;
    sol.response_time = objective(alpha);
    if (alpha > 0.0) {
        sol.efficiency_at_opt = power_efficiency(n.power, alpha * n.arrival_rate);
    } else {
        sol.efficiency_at_opt = n.power.static_power > 0.0
            ? std::numeric_limits<double>::infinity()
            : n.power.pue * n.power.dynamic_power_per_unit;
    }

    const double edge = 1e-7;
    if (a_max - alpha <= edge) {
        sol.binding = Binding::all_local;  // full tilt (1.0 or the stability cap)
    } else if (alpha - a_min <= edge && a_min > edge) {
        sol.binding = Binding::efficiency_cap;
    } else if (alpha <= edge) {
        sol.binding = Binding::all_cloud;
    } else {
        sol.binding = Binding::interior;
    }
    return sol;
}

int closed_form_branch(const NodeParams& n, double cloud_rtt) {
    const double mu = n.service_rate, lambda = n.arrival_rate, tf = cloud_rtt;
    if (mu < lambda / (tf + 1.0)) return 1;
    const double chi = capacity_chi(n.power);
    if (mu >= chi / (2.0 * chi - lambda * (1.0 - tf))) return 2;
    return 3;
}

double closed_form_alpha(const NodeParams& n, double cloud_rtt) {
    const double mu = n.service_rate, lambda = n.arrival_rate, tf = cloud_rtt;
    double alpha;
    switch (closed_form_branch(n, cloud_rtt)) {
        case 1:
            alpha = 1.0;
            break;
        case 2:
            alpha = capacity_chi(n.power) / lambda;
            break;
        default: {
            const double radicand = 1.0 - (lambda / mu) * (1.0 - tf);
            if (radicand < 0.0)
                throw std::domain_error(
                    "closed_form_alpha: negative radicand in square-root branch");
            alpha = (mu / lambda) * (1.0 - std::sqrt(radicand));
            break;
        }
    }
    return std::clamp(alpha, 0.0, 1.0);
}

std::vector<TradeoffPoint> tradeoff_curve(const NodeParams& n, double cloud_rtt,
                                          const std::vector<double>& eta_grid) {
    std::vector<TradeoffPoint> curve;
    curve.reserve(eta_grid.size());
    for (double eta : eta_grid) {
        TradeoffPoint pt;
        pt.eta_cap = eta;
        if (!(eta > n.power.pue * n.power.dynamic_power_per_unit)) {
            pt.skipped = true;
            pt.warning = "efficiency cap not above pue * dynamic power; skipped";
            curve.push_back(pt);
            continue;
        }
        NodeParams scan = n;
        scan.power.efficiency_cap = eta;
        const SingleSolution sol = optimal_alpha_numeric(scan, cloud_rtt);
        pt.alpha_star = sol.alpha_star;
        pt.response_time = sol.response_time;
        curve.push_back(pt);
    }
    return curve;
}

}  // namespace fogopt
