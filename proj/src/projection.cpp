#include "fogopt/projection.hpp"

#include <algorithm>
#include <cmath>

namespace fogopt {

void project_simplex(std::span<double> v, double total) {
    const std::size_t n = v.size();
    if (n == 0) return;
    std::vector<double> u(v.begin(), v.end());
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0, theta = (u[0] - total);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        cum += u[i];
        const double t = (cum - total) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) {
            theta = t;
            k = i;
        }
    }
    (void)k;
    for (double& x : v) x = std::max(x - theta, 0.0);
}

void project_capped_box(std::span<double> v, std::span<const double> ub, double cap) {
    const std::size_t n = v.size();
    auto clamped_sum = [&](double theta) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += std::clamp(v[i] - theta, 0.0, ub[i]);
        return s;
    };
    if (clamped_sum(0.0) <= cap) {
        for (std::size_t i = 0; i < n; ++i) v[i] = std::clamp(v[i], 0.0, ub[i]);
        return;
    }
    // Monotone in theta; bracket then bisect.
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) hi = std::max(hi, v[i]);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (clamped_sum(mid) > cap) lo = mid;
        else hi = mid;
    }
    const double theta = 0.5 * (lo + hi);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::clamp(v[i] - theta, 0.0, ub[i]);
}

}  // namespace fogopt
