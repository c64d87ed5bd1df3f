// Command-line front end: simulate-eulerian, simulate-lagrangian, trace,
// compare, audit. Exit codes: 0 success, 1 invalid configuration or input,
// 2 solver failure, 3 audit violation.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "moch/characteristics.hpp"
#include "moch/config.hpp"
#include "moch/errors.hpp"
#include "moch/eulerian.hpp"
#include "moch/harness.hpp"
#include "moch/io.hpp"
#include "moch/lagrangian.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

enum Exit { ok = 0, invalid = 1, solver = 2, violation = 3 };

struct Overrides {
    std::string config_file;
    std::optional<double> lambda;
    std::optional<std::string> preset;
    std::optional<std::size_t> N;
    std::optional<std::size_t> nodes;
    std::optional<double> dt;
    std::optional<double> T;
    std::optional<std::string> out;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_file, "key = value configuration file");
    cmd->add_option("--lambda", o.lambda, "dispersion parameter (nonzero)");
    cmd->add_option("--preset", o.preset, "gaussian | peakon_like | steepening | from_file");
    cmd->add_option("--N", o.N, "Eulerian grid points");
    cmd->add_option("--nodes", o.nodes, "Lagrangian nodes");
    cmd->add_option("--dt", o.dt, "time step");
    cmd->add_option("--T", o.T, "final time");
    cmd->add_option("--out", o.out, "output directory");
}

moch::RunConfig resolve(const Overrides& o) {
    moch::RunConfig c;
    if (!o.config_file.empty()) c = moch::load_config(o.config_file);
    if (o.lambda) c.lambda = *o.lambda;
    if (o.preset) c.preset = moch::parse_preset(*o.preset);
    if (o.N) c.N = *o.N;
    if (o.nodes) c.nodes = *o.nodes;
    if (o.dt) c.dt = *o.dt;
    if (o.T) c.T = *o.T;
    if (o.out) c.out = *o.out;
    c.validate();
    return c;
}

moch::LagrangianSettings lagrangian_settings(const moch::RunConfig& c) {
    moch::LagrangianSettings s;
    s.set = c.coefficient_set;
    return s;
}

moch::LagrangianTrajectory run_lagrangian(const moch::RunConfig& c) {
    const auto m0 = moch::initial_state(c, c.N);
    const auto init = moch::init_lagrangian(m0, c.nodes, c.lambda);
    return moch::simulate_lagrangian(init, c.dt, c.T, c.output_every, lagrangian_settings(c));
}

void save_config(const moch::RunConfig& c) {
    fs::create_directories(c.out);
    std::ofstream(fs::path(c.out) / "config.txt") << moch::render_config(c);
}

json to_json(const moch::TrajectoryAudit& a) {
    json events = json::array();
    for (const auto& e : a.events) {
        events.push_back({{"time", e.time},
                          {"x_location", e.x_location},
                          {"label_lo", e.label_lo},
                          {"label_hi", e.label_hi},
                          {"theta_rate", e.theta_rate}});
    }
    const auto& l = a.lipschitz;
    return {{"times", a.times},
            {"sup_error", a.sup_error},
            {"lipschitz",
             {{"x_ratio", l.x_ratio},
              {"m_ratio", l.m_ratio},
              {"speed", l.speed},
              {"C_inf", l.C_inf},
              {"C_S", l.C_S},
              {"slack", l.slack},
              {"x_ok", l.x_ok()},
              {"m_ok", l.m_ok()},
              {"speed_ok", l.speed_ok()}}},
            {"energy_residual", a.energy_residual},
            {"arc_identity", a.arc_identity},
            {"breaking_rate_error", a.breaking_rate_error},
            {"breaking_events", events},
            {"eulerian_blowup",
             {{"detected", a.blowup.detected},
              {"time", a.blowup.time},
              {"location", a.blowup.location},
              {"max_slope", a.blowup.max_slope}}}};
}

bool audit_passed(const moch::TrajectoryAudit& a) {
    return a.lipschitz.passed() && a.breaking_rate_error <= 0.05;
}

json to_json(const moch::ComparisonReport& r) {
    json j = {{"level_N", r.level_N},
              {"level_nodes", r.level_nodes},
              {"level_error", r.level_error},
              {"equivalence_tolerance", r.equivalence_tolerance},
              {"equivalence_orders", r.equivalence_orders},
              {"eulerian_orders", r.eulerian_orders},
              {"lagrangian_orders", r.lagrangian_orders}};
    if (r.label_grid) {
        j["label_grid"] = {{"nodes", r.label_grid->nodes},
                           {"difference", r.label_grid->difference},
                           {"orders", r.label_grid->orders},
                           {"breaking_events", r.label_grid->breaking_events}};
    }
    j["passed"] = r.passed();
    return j;
}

void write_json(const fs::path& file, const json& j) { std::ofstream(file) << j.dump(2) << '\n'; }

int simulate_eulerian_cmd(const moch::RunConfig& c) {
    const auto m0 = moch::initial_state(c, c.N);
    const auto traj = moch::simulate_eulerian(m0, c.dt, c.T, c.output_every, moch::eulerian_settings(c));
    save_config(c);
    moch::io::write_trajectory(c.out, traj);
    std::printf("stored %zu states in %s, final time %.6g\n", traj.states.size(), c.out.c_str(),
                traj.states.back().time);
    if (traj.blowup.detected) {
        std::printf("slope blow-up at t = %.6g near x = %.6g (max |m_x| = %.6g)\n", traj.blowup.time,
                    traj.blowup.location, traj.blowup.max_slope);
    }
    return ok;
}

int simulate_lagrangian_cmd(const moch::RunConfig& c) {
    const auto traj = run_lagrangian(c);
    save_config(c);
    moch::io::write_trajectory(c.out, traj);
    std::printf("stored %zu states in %s, %zu breaking events\n", traj.states.size(), c.out.c_str(),
                traj.events.size());
    return ok;
}

int trace_cmd(const moch::RunConfig& c) {
    const auto traj = run_lagrangian(c);
    const auto data = moch::tracing_data(traj);
    const double horizon = data.snapshots.back().time();
    std::vector<moch::Trace> traces(c.trace_points.size());
    moch::parallel_for(traces.size(),
                       [&](std::size_t k) { traces[k] = moch::picard_trace(data, c.trace_points[k], horizon); });
    save_config(c);
    for (std::size_t k = 0; k < traces.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "trace_%03zu.csv", k);
        moch::io::write_trace(fs::path(c.out) / name, traces[k], c.trace_points[k]);
        std::printf("y0 = %-10.6g iterations %zu  x(T) = %.10g  identity residual %.3e\n", c.trace_points[k],
                    traces[k].iterations, traces[k].x.back(),
                    moch::characteristic_identity_residual(data, traces[k]));
    }
    return ok;
}

int compare_cmd(const moch::RunConfig& c) {
    std::pair<moch::EulerianTrajectory, moch::LagrangianTrajectory> finest;
    const auto report = moch::compare_solvers(c, &finest);
    save_config(c);
    const fs::path out(c.out);
    moch::io::write_trajectory(out / "eulerian", finest.first);
    moch::io::write_trajectory(out / "lagrangian", finest.second);
    // the audit is recomputed from the files so that `audit` reproduces it exactly
    const auto audit = moch::audit_trajectories(moch::io::read_eulerian_trajectory(out / "eulerian"),
                                                moch::io::read_lagrangian_trajectory(out / "lagrangian"),
                                                c.invariant_slack);
    write_json(out / "report.json", to_json(report));
    write_json(out / "audit.json", to_json(audit));

    for (std::size_t k = 0; k < report.level_error.size(); ++k) {
        std::printf("N = %5zu nodes = %5zu  sup difference %.3e\n", report.level_N[k], report.level_nodes[k],
                    report.level_error[k]);
    }
    for (double o : report.equivalence_orders) std::printf("equivalence order %.2f\n", o);
    std::printf("%s\n", report.passed() ? "comparison passed" : "comparison FAILED");
    return report.passed() && audit_passed(audit) ? ok : violation;
}

int audit_cmd(const moch::RunConfig& c) {
    const fs::path out(c.out);
    const auto audit = moch::audit_trajectories(moch::io::read_eulerian_trajectory(out / "eulerian"),
                                                moch::io::read_lagrangian_trajectory(out / "lagrangian"),
                                                c.invariant_slack);
    const std::string text = to_json(audit).dump(2) + '\n';
    const fs::path saved = out / "audit.json";
    if (fs::exists(saved)) {
        std::ifstream in(saved);
        const std::string previous{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
        if (previous != text) {
            std::fprintf(stderr, "audit of the stored trajectories differs from %s\n", saved.c_str());
            return violation;
        }
        std::printf("audit reproduces %s\n", saved.c_str());
    } else {
        std::ofstream(saved) << text;
    }
    const auto& l = audit.lipschitz;
    std::printf("dx/dbeta %.6f  dm/dbeta %.6f  speed %.6f (bound %.6f)\n", l.x_ratio, l.m_ratio, l.speed,
                l.C_inf + l.C_S);
    std::printf("energy residual %.3e  breaking events %zu  theta rate error %.3e\n", audit.energy_residual,
                audit.events.size(), audit.breaking_rate_error);
    return audit_passed(audit) ? ok : violation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solvers and audits for the modified Camassa-Holm equation"};
    app.require_subcommand(1);
    Overrides o;
    struct Command {
        const char* name;
        const char* help;
        int (*run)(const moch::RunConfig&);
    };
    const Command commands[] = {
        {"simulate-eulerian", "method-of-lines run on a uniform grid", simulate_eulerian_cmd},
        {"simulate-lagrangian", "run in energy coordinates through breaking", simulate_lagrangian_cmd},
        {"trace", "trace characteristics through a Lagrangian run", trace_cmd},
        {"compare", "solver equivalence at several resolutions plus audits", compare_cmd},
        {"audit", "recompute the audits from stored trajectories", audit_cmd},
    };
    std::vector<std::pair<CLI::App*, const Command*>> subs;
    for (const auto& cmd : commands) {
        auto* sub = app.add_subcommand(cmd.name, cmd.help);
        add_common(sub, o);
        subs.emplace_back(sub, &cmd);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : invalid;
    }

    try {
        const auto config = resolve(o);
        for (const auto& [sub, cmd] : subs) {
            if (sub->parsed()) return cmd->run(config);
        }
    } catch (const moch::SolverFailure& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return solver;
    } catch (const moch::ConvergenceFailure& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return solver;
    } catch (const moch::BoundaryTruncationError& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return solver;
    } catch (const moch::ConfigurationError& e) {
        std::fprintf(stderr, "invalid configuration: %s\n", e.what());
        return invalid;
    } catch (const moch::ParameterError& e) {
        std::fprintf(stderr, "invalid configuration: %s\n", e.what());
        return invalid;
    } catch (const moch::Error& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return invalid;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return invalid;
    }
    return ok;
}
