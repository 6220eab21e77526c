#ifndef FOGOPT_PROJECTION_HPP_
#define FOGOPT_PROJECTION_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace fogopt {

/// Euclidean projection of v onto {x >= 0, sum(x) = total}, in place.
/// Sort-based threshold search, O(n log n).
void project_simplex(std::span<double> v, double total);

/// Euclidean projection of v onto {0 <= x_k <= ub_k, sum(x) <= cap}, in place.
/// Bisection on the common shift when the cap is active.
void project_capped_box(std::span<double> v, std::span<const double> ub, double cap);

}  // namespace fogopt

#endif  // FOGOPT_PROJECTION_HPP_
