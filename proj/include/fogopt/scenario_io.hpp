#ifndef FOGOPT_SCENARIO_IO_HPP_
#define FOGOPT_SCENARIO_IO_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fogopt/model.hpp"

namespace fogopt {

/// Tabulated workload distribution (e.g. frames/s), as loaded from a
/// two-column CSV (value, weight). Weights must sum to 1 within 1e-9.
struct EmpiricalDist {
    std::vector<double> support;
    std::vector<double> weights;

    void validate() const;
    double mean() const;
};

EmpiricalDist load_distribution_csv(const std::string& path);

/// On-disk scenario description: node placements plus global parameters.
/// A node carries either a fixed arrival rate or a reference to a
/// distribution CSV whose mean is used.
struct TopologyNode {
    std::string id;
    double x = 0.0, y = 0.0;   // meters
    double mu = 1.0;
    std::optional<double> lambda;
    std::optional<std::string> distribution;  // CSV path, relative to the topology file
    double tau_u = 0.0;
    double pue = 1.0;
    double w_static = 0.0;
    double w_dynamic = 0.0;
    double eta_cap = 1.0;
};

struct TopologyFile {
    std::vector<TopologyNode> nodes;
    double cloud_rtt = 0.1;     // seconds
    double deadline = 0.5;      // seconds
    double coop_radius = 500.0; // meters
    double inter_rtt = 0.020;   // seconds, same for every permitted pair
};

TopologyFile load_topology(const std::string& path);
void save_topology(const TopologyFile& t, const std::string& path);

enum class CoopRule {
    radius,            // j may forward to i iff distance <= coop_radius
    nearest_neighbor,  // only to the nearest node, and only if within radius
};

/// Builds a Scenario from a topology under the given cooperation rule.
/// `base_dir` resolves relative distribution references.
Scenario build_scenario(const TopologyFile& t, CoopRule rule = CoopRule::radius,
                        const std::string& base_dir = ".");

/// load_topology + build_scenario(radius) in one step.
Scenario load_scenario(const std::string& path);

/// Inverse-CDF sampling; bit-reproducible for a given seed.
std::vector<double> sample_arrivals(const EmpiricalDist& d, std::size_t n,
                                    std::uint64_t seed);

/// Event-driven M/M/1 simulation. Returns the mean sojourn time over
/// `departures` completed jobs, after discarding a warm-up of 10% of that
/// count. Requires lambda < mu.
double mm1_simulate(double lambda, double mu, std::size_t departures,
                    std::uint64_t seed);

enum class DensityProfile { urban, rural };

/// Synthetic desk-scale stand-in for a city deployment: clustered (urban) or
/// sparse (rural) placements with the case-study defaults (deadline 0.5 s,
/// inter-node RTT 20 ms, 500 m cooperation radius, per-node processing capped
/// near 400 frames). Deterministic for a given seed.
TopologyFile make_dublin_like_topology(DensityProfile profile,
                                       std::size_t node_count, std::uint64_t seed);

Scenario make_dublin_like(DensityProfile profile, std::size_t node_count,
                          std::uint64_t seed);

}  // namespace fogopt

#endif  // FOGOPT_SCENARIO_IO_HPP_
