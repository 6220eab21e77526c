#include "fogopt/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fogopt {

using nlohmann::json;

void EmpiricalDist::validate() const {
    if (support.size() != weights.size() || support.empty())
        throw std::invalid_argument("EmpiricalDist: support/weights size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (!(support[i] >= 0.0))
            throw std::invalid_argument("EmpiricalDist: negative support value");
        if (!(weights[i] >= 0.0))
            throw std::invalid_argument("EmpiricalDist: negative weight");
        sum += weights[i];
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("EmpiricalDist: weights must sum to 1");
}

double EmpiricalDist::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) m += support[i] * weights[i];
    return m;
}

EmpiricalDist load_distribution_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open distribution file: " + path);
    EmpiricalDist d;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b)) continue;
        try {
            const double value = std::stod(a);
            const double weight = std::stod(b);
            d.support.push_back(value);
            d.weights.push_back(weight);
        } catch (const std::exception&) {
            // header row
            if (!d.support.empty())
                throw std::runtime_error("bad row in distribution file " + path + ": " + line);
        }
    }
    d.validate();
    return d;
}

namespace {

TopologyNode parse_node(const json& j) {
    TopologyNode n;
    n.id = j.at("id").get<std::string>();
    n.x = j.at("x").get<double>();
    n.y = j.at("y").get<double>();
    n.mu = j.at("mu").get<double>();
    if (j.contains("lambda")) n.lambda = j.at("lambda").get<double>();
    if (j.contains("distribution")) n.distribution = j.at("distribution").get<std::string>();
    if (!n.lambda && !n.distribution)
        throw std::invalid_argument("needs either lambda or distribution");
    n.tau_u = j.at("tau_u").get<double>();
    n.pue = j.at("pue").get<double>();
    n.w_static = j.at("w_static").get<double>();
    n.w_dynamic = j.at("w_dynamic").get<double>();
    n.eta_cap = j.at("eta_cap").get<double>();
    if (!std::isfinite(n.x) || !std::isfinite(n.y))
        throw std::invalid_argument("coordinates must be finite");
    return n;
}

}  // namespace

TopologyFile load_topology(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open topology file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("topology parse error in " + path + ": " + e.what());
    }
    TopologyFile t;
    t.cloud_rtt = j.at("cloud_rtt").get<double>();
    t.deadline = j.at("deadline").get<double>();
    t.coop_radius = j.at("coop_radius").get<double>();
    t.inter_rtt = j.at("inter_rtt").get<double>();
    if (!(t.cloud_rtt >= 0.0 && t.deadline > 0.0 && t.coop_radius > 0.0 && t.inter_rtt >= 0.0))
        throw std::runtime_error("topology globals must be positive in " + path);
    std::size_t idx = 0;
    for (const auto& jn : j.at("nodes")) {
        try {
            t.nodes.push_back(parse_node(jn));
        } catch (const std::exception& e) {
            throw std::runtime_error("bad node record #" + std::to_string(idx) + " in " +
                                     path + ": " + e.what());
        }
        ++idx;
    }
    for (std::size_t a = 0; a < t.nodes.size(); ++a)
        for (std::size_t b = a + 1; b < t.nodes.size(); ++b)
            if (t.nodes[a].id == t.nodes[b].id)
                throw std::runtime_error("duplicate node id '" + t.nodes[a].id + "' in " + path);
    return t;
}

void save_topology(const TopologyFile& t, const std::string& path) {
    json j;
    j["cloud_rtt"] = t.cloud_rtt;
    j["deadline"] = t.deadline;
    j["coop_radius"] = t.coop_radius;
    j["inter_rtt"] = t.inter_rtt;
    j["nodes"] = json::array();
    for (const auto& n : t.nodes) {
        json jn = {{"id", n.id},       {"x", n.x},
                   {"y", n.y},         {"mu", n.mu},
                   {"tau_u", n.tau_u}, {"pue", n.pue},
                   {"w_static", n.w_static}, {"w_dynamic", n.w_dynamic},
                   {"eta_cap", n.eta_cap}};
        if (n.lambda) jn["lambda"] = *n.lambda;
        if (n.distribution) jn["distribution"] = *n.distribution;
        j["nodes"].push_back(jn);
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write topology file: " + path);
    out << j.dump(2) << "\n";
}

Scenario build_scenario(const TopologyFile& t, CoopRule rule,
                        const std::string& base_dir) {
    const std::size_t n = t.nodes.size();
    Scenario s;
    s.cloud_rtt = t.cloud_rtt;
    s.deadline = t.deadline;
    s.inter_rtt = Mat(n, n, 0.0);
    s.coop_mask = BoolMat(n, n, false);

    for (const auto& tn : t.nodes) {
        double lambda;
        if (tn.lambda) {
            lambda = *tn.lambda;
        } else {
            const auto p = std::filesystem::path(base_dir) / *tn.distribution;
            lambda = load_distribution_csv(p.string()).mean();
        }
        s.nodes.emplace_back(tn.id, lambda, tn.mu, tn.tau_u,
                             PowerParams(tn.pue, tn.w_static, tn.w_dynamic, tn.eta_cap));
    }

    auto dist = [&](std::size_t a, std::size_t b) {
        const double dx = t.nodes[a].x - t.nodes[b].x;
        const double dy = t.nodes[a].y - t.nodes[b].y;
        return std::hypot(dx, dy);
    };

    for (std::size_t j = 0; j < n; ++j) {
        s.coop_mask.set(j, j, true);
        for (std::size_t i = j + 1; i < n; ++i) {
            s.inter_rtt(j, i) = s.inter_rtt(i, j) = t.inter_rtt;
        }
    }

    if (rule == CoopRule::radius) {
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i)
                if (i != j && dist(j, i) <= t.coop_radius) s.coop_mask.set(j, i, true);
    } else {
        // Link each node with its nearest neighbor, when that neighbor is in
        // forwarding range. Mutualized so the mask stays symmetric.
        for (std::size_t j = 0; j < n; ++j) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t nn = j;
            for (std::size_t i = 0; i < n; ++i) {
                if (i == j) continue;
                const double d = dist(j, i);
                if (d < best) {
                    best = d;
                    nn = i;
                }
            }
            if (nn != j && best <= t.coop_radius) {
                s.coop_mask.set(j, nn, true);
                s.coop_mask.set(nn, j, true);
            }
        }
    }

    s.validate();
    return s;
}

Scenario load_scenario(const std::string& path) {
    const TopologyFile t = load_topology(path);
    return build_scenario(t, CoopRule::radius,
                          std::filesystem::path(path).parent_path().string());
}

namespace {

// Uniform doubles straight off the engine bits so sequences are reproducible
// across standard libraries.
class Rng {
 public:
    explicit Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ULL) {}

    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double exponential(double rate) {
        return -std::log1p(-uniform()) / rate;
    }

 private:
    std::uint64_t next() {  // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::uint64_t state_;
};

}  // namespace

std::vector<double> sample_arrivals(const EmpiricalDist& d, std::size_t n,
                                    std::uint64_t seed) {
    d.validate();
    std::vector<double> cdf(d.weights.size());
    double cum = 0.0;
    for (std::size_t i = 0; i < d.weights.size(); ++i) {
        cum += d.weights[i];
        cdf[i] = cum;
    }
    cdf.back() = 1.0;
    Rng rng(seed);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = rng.uniform();
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        out.push_back(d.support[static_cast<std::size_t>(it - cdf.begin())]);
    }
    return out;
}

double mm1_simulate(double lambda, double mu, std::size_t departures,
                    std::uint64_t seed) {
    if (!(lambda < mu))
        throw InstabilityError("mm1_simulate: lambda >= mu");
    if (departures == 0) throw std::invalid_argument("mm1_simulate: zero departures");
    const std::size_t warmup = departures / 10;
    Rng rng(seed);
    double arrival = 0.0, last_departure = 0.0, total_sojourn = 0.0;
    for (std::size_t k = 0; k < warmup + departures; ++k) {
        arrival += rng.exponential(lambda);
        const double start = std::max(arrival, last_departure);
        last_departure = start + rng.exponential(mu);
        if (k >= warmup) total_sojourn += last_departure - arrival;
    }
    return total_sojourn / static_cast<double>(departures);
}

TopologyFile make_dublin_like_topology(DensityProfile profile,
                                       std::size_t node_count, std::uint64_t seed) {
    if (node_count < 1)
        throw std::invalid_argument("make_dublin_like_topology: node_count >= 1 required");
    Rng rng(seed);
    TopologyFile t;
    t.cloud_rtt = 0.25;
    t.deadline = 0.5;      // 500 ms tolerable response time
    t.coop_radius = 500.0; // meters
    t.inter_rtt = 0.020;   // 20 ms forwarding RTT

    // Urban: a tight ring (diameter < radius) so every pair may cooperate.
    // Rural: ring spacing well beyond the radius, isolating every node.
    const double pi = 3.14159265358979323846;
    const double ring_r = profile == DensityProfile::urban
        ? 240.0
        : std::max(800.0, 800.0 * static_cast<double>(node_count) / (2.0 * pi));

    for (std::size_t k = 0; k < node_count; ++k) {
        TopologyNode n;
        n.id = "fog" + std::to_string(k);
        const double angle = 2.0 * pi * static_cast<double>(k) /
                             static_cast<double>(node_count);
        n.x = ring_r * std::cos(angle) + rng.uniform(-10.0, 10.0);
        n.y = ring_r * std::sin(angle) + rng.uniform(-10.0, 10.0);
        n.mu = rng.uniform(480.0, 540.0);
        // Alternate overloaded and lightly loaded nodes so cooperation has
        // spare capacity to exploit.
        n.lambda = (k % 2 == 0) ? rng.uniform(550.0, 700.0) : rng.uniform(25.0, 60.0);
        n.tau_u = rng.uniform(0.005, 0.02);
        n.pue = rng.uniform(1.1, 1.5);
        n.w_dynamic = rng.uniform(0.5, 1.0);
        n.w_static = rng.uniform(50.0, 100.0);
        // Pick the efficiency cap so chi lands under the 400-frame ceiling.
        const double chi_target = rng.uniform(300.0, 380.0);
        n.eta_cap = n.pue * n.w_dynamic + n.pue * n.w_static / chi_target;
        t.nodes.push_back(n);
    }
    return t;
}

Scenario make_dublin_like(DensityProfile profile, std::size_t node_count,
                          std::uint64_t seed) {
    return build_scenario(make_dublin_like_topology(profile, node_count, seed));
}

}  // namespace fogopt
