// Command-line front end: single-node and cooperative solves, tradeoff
// sweeps, algorithm comparison, queue-model validation, scenario generation.
// All outputs are UTF-8 CSV/JSON with a header naming the units.
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fogopt/central.hpp"
#include "fogopt/dist.hpp"
#include "fogopt/model.hpp"
#include "fogopt/scenario_io.hpp"
#include "fogopt/single.hpp"
#include "fogopt/trace.hpp"

using json = nlohmann::json;
using namespace fogopt;

namespace {

enum class LogLevel { error = 0, info = 1, debug = 2 };

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("FOGOPT_LOG");
        if (!env) return LogLevel::error;
        const std::string v(env);
        if (v == "debug") return LogLevel::debug;
        if (v == "info") return LogLevel::info;
        return LogLevel::error;
    }();
    return level;
}

void log_line(LogLevel at, const std::string& msg) {
    if (log_level() >= at) std::cerr << "fogopt: " << msg << "\n";
}

void write_text(const std::string& path, const std::string& body) {
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << body;
    log_line(LogLevel::info, "wrote " + path);
}

NodeParams node_from_flags(double lambda, double mu, double tau_u, double pue,
                           double w_static, double w_dynamic, double eta_cap) {
    return NodeParams("cli", lambda, mu, tau_u,
                      PowerParams(pue, w_static, w_dynamic, eta_cap));
}

json allocation_to_json(const Allocation& a, const Scenario& s) {
    json rows = json::array();
    for (std::size_t j = 0; j < s.size(); ++j) {
        json row;
        row["node"] = s.nodes[j].id;
        row["forwarded"] = json::array();
        for (std::size_t i = 0; i < s.size(); ++i)
            row["forwarded"].push_back(a.phi(j, i));
        row["cloud"] = a.phi_cloud[j];
        rows.push_back(row);
    }
    return rows;
}

int iterations_to_gap(const SolveTrace& t, double reference, double tol) {
    double best = 1e300;
    for (const auto& r : t.records) {
        if (r.objective < best) best = r.objective;
        if ((best - reference) / reference <= tol) return r.iter;
    }
    return -1;
}

struct SolverFlags {
    double step_base = 3e-6;
    double rho = 1e-6;
    double gap_tol = 1e-2;
    double tol = 1e-9;
    int max_iters = 0;  // 0: per-algorithm default
};

int cmd_solve_coop(const std::string& scenario_path, const std::string& algo,
                   const SolverFlags& f, const std::string& out,
                   const std::string& trace_path, bool timings) {
    Scenario s = load_scenario(scenario_path);
    log_line(LogLevel::info, "loaded scenario with " + std::to_string(s.size()) +
                                 " nodes from " + scenario_path);
    Allocation a;
    SolveTrace trace;
    try {
        if (algo == "central") {
            auto [ra, rt] =
                solve_centralized(s, f.tol, f.max_iters > 0 ? f.max_iters : 100000);
            a = ra;
            trace = rt;
        } else if (algo == "subgradient") {
            SubgradientConfig cfg;
            cfg.step_base = f.step_base;
            cfg.gap_tol = f.gap_tol;
            if (f.max_iters > 0) cfg.max_iters = f.max_iters;
            auto [ra, rt] = run_subgradient(s, cfg);
            a = ra;
            trace = rt;
        } else {
            AdmmConfig cfg;
            cfg.rho = f.rho;
            if (f.max_iters > 0) cfg.max_iters = f.max_iters;
            auto [ra, rt] = run_admm_vs(s, cfg);
            a = ra;
            trace = rt;
        }
    } catch (const SolveError& e) {
        const std::string dump =
            (trace_path.empty() ? "solve_trace.csv" : trace_path);
        std::ofstream tf(dump, std::ios::binary);
        write_trace_csv(e.trace(), tf, timings);
        std::cerr << "fogopt: solver error: " << e.what()
                  << " (trace written to " << dump << ")\n";
        return 1;
    }

    json j;
    j["units"] = {{"objective", "seconds"}, {"workload", "workload-units/s"}};
    j["algorithm"] = algo;
    j["objective"] = coop_objective(a, s);
    j["iterations"] = trace.records.size();
    j["allocation"] = allocation_to_json(a, s);
    const FeasibilityReport rep = check_feasibility(a, s);
    j["feasible"] = rep.feasible;
    write_text(out, j.dump(2) + "\n");
    if (!trace_path.empty()) {
        std::ofstream tf(trace_path, std::ios::binary);
        write_trace_csv(trace, tf, timings);
        log_line(LogLevel::info, "wrote " + trace_path);
    }
    log_line(LogLevel::debug,
             "iterations: " + std::to_string(trace.records.size()));
    return 0;
}

int cmd_compare(const std::string& scenario_path, const SolverFlags& f,
                std::uint64_t seed, const std::string& out, bool timings) {
    Scenario s = load_scenario(scenario_path);
    auto [central, central_trace] = solve_centralized(s, f.tol);
    const double reference = coop_objective(central, s);

    SubgradientConfig sg;
    sg.step_base = f.step_base;
    sg.gap_tol = f.gap_tol;
    sg.oracle_objective = reference;
    if (f.max_iters > 0) sg.max_iters = f.max_iters;
    auto [sg_alloc, sg_trace] = run_subgradient(s, sg);

    AdmmConfig ad;
    ad.rho = f.rho;
    ad.gap_tol = f.gap_tol;
    ad.oracle_objective = reference;
    if (f.max_iters > 0) ad.max_iters = f.max_iters;
    Allocation ad_alloc;
    SolveTrace ad_trace;
    try {
        auto [ra, rt] = run_admm_vs(s, ad);
        ad_alloc = ra;
        ad_trace = rt;
    } catch (const SolveError& e) {
        ad_trace = e.trace();
        ad_alloc = project_feasible(Allocation::all_cloud(s), s);
    }

    // Iterations-to-gap is measured on the bare dual dynamics, with the
    // primal-recovery refinement disabled, so the column compares the two
    // update rules themselves rather than the shared recovery step. -1 means
    // the gap was not reached within the iteration budget.
    SubgradientConfig sgm = sg;
    sgm.transport_recovery = false;
    SolveTrace sgm_trace;
    try {
        sgm_trace = run_subgradient(s, sgm).second;
    } catch (const SolveError& e) {
        sgm_trace = e.trace();
    }
    AdmmConfig adm = ad;
    adm.transport_recovery = false;
    SolveTrace adm_trace;
    try {
        adm_trace = run_admm_vs(s, adm).second;
    } catch (const SolveError& e) {
        adm_trace = e.trace();
    }

    std::ostringstream os;
    os << "# objective: seconds; iterations_to_gap: count at relative gap "
       << f.gap_tol << " vs central, recovery step disabled, -1 if never; "
       << "wall_ms: milliseconds (0 unless --timings)\n";
    os << "# scenario=" << scenario_path << " seed=" << seed << "\n";
    os << "algorithm,objective,relative_gap,iterations,iterations_to_gap,wall_ms\n";
    auto row = [&](const std::string& name, const Allocation& a,
                   const SolveTrace& t, const SolveTrace* measure) {
        const double obj = coop_objective(a, s);
        const double gap = (obj - reference) / reference;
        const double ms =
            (timings && !t.records.empty()) ? t.records.back().wall_ms : 0.0;
        os << name << "," << std::setprecision(17) << obj << "," << gap << ","
           << t.records.size() << ","
           << iterations_to_gap(measure ? *measure : t, reference, f.gap_tol)
           << "," << ms << "\n";
    };
    row("central", central, central_trace, nullptr);
    row("subgradient", sg_alloc, sg_trace, &sgm_trace);
    row("admm", ad_alloc, ad_trace, &adm_trace);
    write_text(out, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fog workload placement toolkit"};
    app.require_subcommand(1);

    // shared node flags
    double lambda = 5.0, mu = 10.0, tau_f = 0.1, tau_u = 0.0;
    double pue = 1.0, w_static = 50.0, w_dynamic = 0.01, eta_cap = 20.0;
    std::string scenario_path, out, trace_path, algo = "central";
    SolverFlags flags;
    std::uint64_t seed = 1;
    bool timings = false;

    auto add_node_flags = [&](CLI::App* c) {
        c->add_option("--lambda", lambda, "arrival rate, workload-units/s");
        c->add_option("--mu", mu, "service rate, workload-units/s");
        c->add_option("--tau-f", tau_f, "fog-to-cloud RTT, seconds");
        c->add_option("--tau-u", tau_u, "user-to-fog RTT, seconds");
        c->add_option("--pue", pue, "power usage effectiveness, >= 1");
        c->add_option("--w-static", w_static, "static power, watts");
        c->add_option("--w-dynamic", w_dynamic, "dynamic power, watts per unit");
        c->add_option("--eta-cap", eta_cap, "efficiency cap, watts per unit");
    };

    CLI::App* solve_single = app.add_subcommand(
        "solve-single", "Optimal local fraction for one node (JSON)");
    add_node_flags(solve_single);
    solve_single->add_option("-o,--output", out, "output path, '-' for stdout");

    CLI::App* solve_coop = app.add_subcommand(
        "solve-coop", "Cooperative allocation for a scenario file (JSON)");
    solve_coop->add_option("--scenario", scenario_path, "scenario JSON path")
        ->required()
        ->check(CLI::ExistingFile);
    solve_coop->add_option("--algorithm", algo, "central|subgradient|admm")
        ->check(CLI::IsMember({"central", "subgradient", "admm"}));
    solve_coop->add_option("--step-base", flags.step_base, "subgradient step constant");
    solve_coop->add_option("--rho", flags.rho, "consensus penalty")
        ->check(CLI::PositiveNumber);
    solve_coop->add_option("--gap-tol", flags.gap_tol, "stopping gap")
        ->check(CLI::PositiveNumber);
    solve_coop->add_option("--tol", flags.tol, "centralized objective tolerance")
        ->check(CLI::PositiveNumber);
    solve_coop->add_option("--max-iters", flags.max_iters, "iteration budget");
    solve_coop->add_option("-o,--output", out, "output path, '-' for stdout");
    solve_coop->add_option("--trace", trace_path, "per-iteration trace CSV path");
    solve_coop->add_flag("--timings", timings, "record wall time in traces");

    CLI::App* sweep = app.add_subcommand(
        "sweep", "Response time vs efficiency cap for one node (CSV)");
    add_node_flags(sweep);
    double eta_min = 0.0, eta_max = 0.0;
    int points = 20;
    sweep->add_option("--eta-min", eta_min, "grid start, watts per unit")->required();
    sweep->add_option("--eta-max", eta_max, "grid end, watts per unit")->required();
    sweep->add_option("--points", points, "grid size")->check(CLI::PositiveNumber);
    sweep->add_option("-o,--output", out, "output path, '-' for stdout");

    CLI::App* compare = app.add_subcommand(
        "compare", "Central vs distributed algorithms on one scenario (CSV)");
    compare->add_option("--scenario", scenario_path, "scenario JSON path")
        ->required()
        ->check(CLI::ExistingFile);
    compare->add_option("--step-base", flags.step_base, "subgradient step constant");
    compare->add_option("--rho", flags.rho, "consensus penalty")
        ->check(CLI::PositiveNumber);
    compare->add_option("--gap-tol", flags.gap_tol, "gap for iterations_to_gap")
        ->check(CLI::PositiveNumber);
    compare->add_option("--max-iters", flags.max_iters, "iteration budget");
    compare->add_option("--seed", seed, "run seed (recorded in the output)");
    compare->add_option("-o,--output", out, "output path, '-' for stdout");
    compare->add_flag("--timings", timings, "record wall time (breaks byte-identity)");

    CLI::App* validate = app.add_subcommand(
        "validate-queue", "Simulated vs analytic M/M/1 sojourn time (JSON)");
    validate->add_option("--lambda", lambda, "arrival rate, jobs/s")->required();
    validate->add_option("--mu", mu, "service rate, jobs/s")->required();
    std::size_t departures = 100000;
    validate->add_option("--departures", departures, "completed jobs to average");
    validate->add_option("--seed", seed, "simulation seed");
    validate->add_option("-o,--output", out, "output path, '-' for stdout");

    CLI::App* gen = app.add_subcommand(
        "gen-scenario", "Synthetic city-like topology (JSON)");
    std::string profile = "urban";
    std::size_t nodes = 20;
    gen->add_option("--profile", profile, "urban|rural")
        ->check(CLI::IsMember({"urban", "rural"}));
    gen->add_option("--nodes", nodes, "node count")->check(CLI::PositiveNumber);
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("-o,--output", out, "output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // 0 covers --help; anything else is usage
    }

    try {
        if (solve_single->parsed()) {
            const NodeParams n =
                node_from_flags(lambda, mu, tau_u, pue, w_static, w_dynamic, eta_cap);
            const SingleSolution sol = optimal_alpha_numeric(n, tau_f);
            json j;
            j["units"] = {{"response_time", "seconds"},
                          {"efficiency_at_opt", "watts per workload-unit"}};
            j["alpha_star"] = sol.alpha_star;
            j["response_time"] = sol.response_time;
            j["efficiency_at_opt"] = sol.efficiency_at_opt;
            j["binding"] = to_string(sol.binding);
            write_text(out, j.dump(2) + "\n");
        } else if (solve_coop->parsed()) {
            return cmd_solve_coop(scenario_path, algo, flags, out, trace_path,
                                  timings);
        } else if (sweep->parsed()) {
            const NodeParams n =
                node_from_flags(lambda, mu, tau_u, pue, w_static, w_dynamic, eta_cap);
            std::vector<double> grid;
            for (int k = 0; k < points; ++k)
                grid.push_back(eta_min +
                               (eta_max - eta_min) * k / std::max(1, points - 1));
            const auto curve = tradeoff_curve(n, tau_f, grid);
            std::ostringstream os;
            os << "# eta_cap: watts per workload-unit; response_time: seconds\n";
            os << "eta_cap,alpha_star,response_time,skipped,warning\n";
            for (const auto& pt : curve)
                os << std::setprecision(17) << pt.eta_cap << "," << pt.alpha_star
                   << "," << pt.response_time << "," << (pt.skipped ? 1 : 0)
                   << "," << pt.warning << "\n";
            write_text(out, os.str());
        } else if (compare->parsed()) {
            return cmd_compare(scenario_path, flags, seed, out, timings);
        } else if (validate->parsed()) {
            const double mean = mm1_simulate(lambda, mu, departures, seed);
            const double analytic = 1.0 / (mu - lambda);
            json j;
            j["units"] = {{"mean_sojourn", "seconds"}, {"analytic", "seconds"}};
            j["mean_sojourn"] = mean;
            j["analytic"] = analytic;
            j["relative_error"] = std::abs(mean - analytic) / analytic;
            write_text(out, j.dump(2) + "\n");
        } else if (gen->parsed()) {
            const DensityProfile p =
                profile == "urban" ? DensityProfile::urban : DensityProfile::rural;
            save_topology(make_dublin_like_topology(p, nodes, seed), out);
            log_line(LogLevel::info, "wrote " + out);
        }
    } catch (const SolveError& e) {
        std::cerr << "fogopt: solver error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "fogopt: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
