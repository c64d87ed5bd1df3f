#include "moch/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "moch/errors.hpp"
#include "moch/greens.hpp"
#include "moch/numerics.hpp"
#include "moch/transform.hpp"

namespace moch {

std::size_t thread_count() {
    if (const char* env = std::getenv("MOCH_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min(n, thread_count());
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

namespace {

// b(s) = exp(-1/(1-s^2)) and its derivative
double bump(double s) { return std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }

double bump_slope(double s) {
    if (std::abs(s) >= 1.0) return 0.0;
    const double q = 1.0 - s * s;
    return bump(s) * (-2.0 * s / (q * q));
}

void check_uniform_times(const std::vector<EulerianState>& states) {
    if (states.size() < 2) throw InvalidInput("weak-form residual needs at least two stored states");
    const double dt = states[1].time - states[0].time;
    for (std::size_t k = 1; k < states.size(); ++k) {
        if (std::abs(states[k].time - states[k - 1].time - dt) > 1e-9 * std::max(1.0, dt)) {
            throw InvalidInput("stored times are not uniformly spaced");
        }
    }
}

// sup over the grid of |a - b|, with b sampled on its own (possibly different) grid
double sup_difference(const EulerianState& a, const EulerianState& b) {
    double out = 0.0;
    for (std::size_t i = 0; i < a.m.size(); ++i) {
        const double x = a.grid.x(i);
        out = std::max(out, std::abs(a.m[i] - numerics::interpolate_uniform(b.grid.origin, b.grid.spacing, b.m, x)));
    }
    return out;
}

std::vector<double> orders_of(const std::vector<double>& errors) {
    std::vector<double> out;
    for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
        out.push_back(errors[k + 1] > 0.0 && errors[k] > 0.0 ? std::log2(errors[k] / errors[k + 1]) : 0.0);
    }
    return out;
}

std::size_t halved(std::size_t count, std::size_t times) {
    for (std::size_t k = 0; k < times; ++k) count /= 2;
    return count;
}

}  // namespace

double BumpFunction::value(double t, double x) const {
    return bump((t - t_center) / t_radius) * bump((x - x_center) / x_radius);
}

double BumpFunction::d_t(double t, double x) const {
    return bump_slope((t - t_center) / t_radius) / t_radius * bump((x - x_center) / x_radius);
}

double BumpFunction::d_x(double t, double x) const {
    return bump((t - t_center) / t_radius) * bump_slope((x - x_center) / x_radius) / x_radius;
}

std::vector<BumpFunction> standard_bumps(double T) {
    std::vector<BumpFunction> out;
    for (double c : {-2.0, -1.0, 0.0, 1.0, 2.0}) out.push_back({0.5 * T, 0.45 * T, c, 1.5});
    return out;
}

WeakFormResidual weak_form_residual(const EulerianTrajectory& trajectory, const std::vector<BumpFunction>& tests) {
    const auto& states = trajectory.states;
    check_uniform_times(states);
    const auto& grid = states.front().grid;
    const double t0 = states.front().time;
    const double t1 = states.back().time;
    for (const auto& b : tests) {
        if (!(b.t_radius > 0.0 && b.x_radius > 0.0)) throw InvalidInput("test function radii must be positive");
        if (b.t_center - b.t_radius < t0 || b.t_center + b.t_radius > t1 || b.x_center - b.x_radius < grid.front() ||
            b.x_center + b.x_radius > grid.back()) {
            throw InvalidInput("test function support leaves the space-time box");
        }
    }

    WeakFormResidual r;
    r.balance.assign(tests.size(), 0.0);
    r.gamma_form.assign(tests.size(), 0.0);
    const double dt = states[1].time - states[0].time;
    const double h = grid.spacing;
    const double lambda = trajectory.lambda;
    const auto x = grid.abscissae();

    for (std::size_t k = 0; k < states.size(); ++k) {
        const auto& s = states[k];
        if (s.grid.count != grid.count || s.grid.origin != grid.origin || s.grid.spacing != grid.spacing) {
            throw InvalidInput("stored states use different grids");
        }
        const double wt = (k == 0 || k + 1 == states.size()) ? 0.5 * dt : dt;
        const auto c = compute_fields(s, lambda, trajectory.set);
        const auto gamma = m_to_gamma(s).gamma;
        std::vector<double> g2(gamma.size());
        for (std::size_t i = 0; i < g2.size(); ++i) g2[i] = gamma[i] * gamma[i];
        const auto kg = greens::conv_kernel(greens::SampledFunction(x, gamma));
        const auto kg2 = greens::conv_kernel(greens::SampledFunction(x, g2));

        for (std::size_t j = 0; j < tests.size(); ++j) {
            const auto& b = tests[j];
            double bal = 0.0;
            double gam = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (std::abs(x[i] - b.x_center) >= b.x_radius) continue;
                const double phi = b.value(s.time, x[i]);
                const double phit = b.d_t(s.time, x[i]);
                const double phix = b.d_x(s.time, x[i]);
                const double w = c.mx[i] * c.mx[i];
                bal += w * phit + c.u[i] * w * phix + 2.0 * c.E[i] * phi;
                const double v = -(kg.odd_part[i] + kg2.even_part[i] / (2.0 * lambda));
                gam += gamma[i] * phit + v * gamma[i] * phix + (0.5 * g2[i] + lambda * v) * phi;
            }
            // the test function vanishes at both grid ends, so interior weights are all h
            r.balance[j] += wt * h * bal;
            r.gamma_form[j] += wt * h * gam;
        }
    }
    return r;
}

LipschitzAudit lipschitz_audit(const LagrangianTrajectory& trajectory, double slack) {
    LipschitzAudit a;
    a.slack = slack;
    const auto& states = trajectory.states;
    for (std::size_t k = 0; k < states.size(); ++k) {
        const auto& s = states[k];
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            const double db = s.beta[i + 1] - s.beta[i];
            a.x_ratio = std::max(a.x_ratio, (s.x[i + 1] - s.x[i]) / db);
            a.m_ratio = std::max(a.m_ratio, std::abs(s.m[i + 1] - s.m[i]) / db);
        }
        const auto c = compute_fields_lagrangian(s, trajectory.set);
        a.C_inf = std::max(a.C_inf, numerics::max_abs(c.u));
        std::vector<double> absF(c.F.size());
        for (std::size_t i = 0; i < absF.size(); ++i) absF[i] = std::abs(c.F[i]);
        a.C_S = std::max(a.C_S, numerics::trapezoid(s.x, absF));
        if (k > 0) {
            const auto& p = states[k - 1];
            const double dt = s.time - p.time;
            if (dt > 0.0 && p.size() == s.size()) {
                for (std::size_t i = 0; i < s.size(); ++i) a.speed = std::max(a.speed, std::abs(s.x[i] - p.x[i]) / dt);
            }
        }
    }
    return a;
}

TrajectoryAudit audit_trajectories(const EulerianTrajectory& eulerian, const LagrangianTrajectory& lagrangian,
                                   double slack) {
    TrajectoryAudit a;
    a.blowup = eulerian.blowup;
    a.events = lagrangian.events;
    const std::size_t common = std::min(eulerian.states.size(), lagrangian.states.size());
    for (std::size_t k = 0; k < common; ++k) {
        const auto& e = eulerian.states[k];
        const auto& l = lagrangian.states[k];
        if (std::abs(e.time - l.time) > 1e-9 * std::max(1.0, std::abs(e.time))) {
            throw InvalidInput("Eulerian and Lagrangian runs are stored at different times");
        }
        const auto pb = to_eulerian(l, e.grid);
        a.times.push_back(e.time);
        a.sup_error.push_back(numerics::max_abs_diff(e.m, pb.state.m));
    }
    a.lipschitz = lipschitz_audit(lagrangian, slack);
    if (eulerian.states.size() >= 2) a.energy_residual = integrated_energy_residual(eulerian);
    for (const auto& s : lagrangian.states) {
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            const double db = s.beta[i + 1] - s.beta[i];
            const double c0 = 0.5 * (1.0 + std::cos(s.theta[i]));
            const double c1 = 0.5 * (1.0 + std::cos(s.theta[i + 1]));
            a.arc_identity = std::max(a.arc_identity, std::abs((s.x[i + 1] - s.x[i]) / db - 0.5 * (c0 + c1)));
        }
    }
    for (const auto& e : lagrangian.events) {
        a.breaking_rate_error = std::max(a.breaking_rate_error, std::abs(e.theta_rate + 1.0));
    }
    return a;
}

LabelGridResult label_grid_experiment(const RunConfig& config, std::size_t levels) {
    config.validate();
    if (levels == 0) throw ConfigurationError("label-grid experiment needs at least one level");
    if (!(config.jitter > 0.0)) throw ConfigurationError("label-grid experiment needs jitter > 0");
    const auto grid_state = initial_state(config, config.N);
    LabelGridResult r;
    r.nodes.resize(levels);
    r.difference.resize(levels);
    std::vector<std::size_t> events(levels, 0);
    LagrangianSettings settings;
    settings.set = config.coefficient_set;
    // runs 2k (uniform) and 2k+1 (jittered) of level k
    std::vector<EulerianState> finals(2 * levels);
    parallel_for(2 * levels, [&](std::size_t job) {
        const std::size_t level = job / 2;
        const std::size_t nodes = halved(config.nodes, levels - 1 - level);
        if (nodes < 16) throw ConfigurationError("label-grid level has fewer than 16 nodes");
        const double jitter = job % 2 == 0 ? 0.0 : config.jitter;
        const auto init = init_lagrangian(grid_state, nodes, config.lambda, jitter, config.seed);
        const auto traj = simulate_lagrangian(init, config.dt, config.T, config.output_every, settings);
        finals[job] = to_eulerian(traj.states.back(), grid_state.grid).state;
        if (job % 2 == 0) {
            r.nodes[level] = nodes;
            events[level] = traj.events.size();
        }
    });
    for (std::size_t k = 0; k < levels; ++k) r.difference[k] = numerics::max_abs_diff(finals[2 * k].m, finals[2 * k + 1].m);
    r.orders = orders_of(r.difference);
    r.breaking_events = events.back();
    return r;
}

bool ComparisonReport::passed() const {
    if (finest_error() > equivalence_tolerance) return false;
    if (!audit.lipschitz.passed()) return false;
    if (audit.breaking_rate_error > 0.05) return false;
    if (label_grid) {
        for (double o : label_grid->orders) {
            if (!(o > 0.0)) return false;
        }
    }
    return true;
}

ComparisonReport compare_solvers(const RunConfig& config,
                                 std::pair<EulerianTrajectory, LagrangianTrajectory>* finest) {
    config.validate();
    if (config.levels < 3) throw ConfigurationError("compare needs at least 3 refinement levels");
    const std::size_t levels = config.levels;
    ComparisonReport report;
    report.equivalence_tolerance = config.equivalence_tolerance;
    report.level_N.resize(levels);
    report.level_nodes.resize(levels);
    for (std::size_t k = 0; k < levels; ++k) {
        report.level_N[k] = halved(config.N, levels - 1 - k);
        report.level_nodes[k] = halved(config.nodes, levels - 1 - k);
        if (report.level_N[k] < 16 || report.level_nodes[k] < 16) {
            throw ConfigurationError("coarsest compare level has fewer than 16 points");
        }
    }

    std::vector<EulerianTrajectory> euler(levels);
    std::vector<LagrangianTrajectory> lagr(levels);
    const auto settings = eulerian_settings(config);
    LagrangianSettings lsettings;
    lsettings.set = config.coefficient_set;
    parallel_for(2 * levels, [&](std::size_t job) {
        const std::size_t k = job / 2;
        const auto m0 = initial_state(config, report.level_N[k]);
        try {
            if (job % 2 == 0) {
                euler[k] = simulate_eulerian(m0, config.dt, config.T, config.output_every, settings);
            } else {
                const auto init = init_lagrangian(m0, report.level_nodes[k], config.lambda);
                lagr[k] = simulate_lagrangian(init, config.dt, config.T, config.output_every, lsettings);
            }
        } catch (const SolverFailure& e) {
            throw SolverFailure(std::string(job % 2 == 0 ? "Eulerian" : "Lagrangian") + " run at level " +
                                std::to_string(k) + ": " + e.what());
        }
    });

    for (std::size_t k = 0; k < levels; ++k) {
        const auto a = audit_trajectories(euler[k], lagr[k], config.invariant_slack);
        report.level_error.push_back(a.sup_error.empty() ? 0.0
                                                         : *std::max_element(a.sup_error.begin(), a.sup_error.end()));
        if (k + 1 == levels) report.audit = a;
    }
    report.equivalence_orders = orders_of(report.level_error);

    // successive differences of the final states, sampled on the coarser grid
    std::vector<double> de;
    std::vector<double> dl;
    for (std::size_t k = 0; k + 1 < levels; ++k) {
        const auto& ea = euler[k].states.back();
        const auto& eb = euler[k + 1].states.back();
        // a level stopped by blow-up ends early and has nothing to compare with
        if (ea.time == eb.time) de.push_back(sup_difference(ea, eb));
        const auto& grid = euler[k].states.front().grid;
        const auto coarse = to_eulerian(lagr[k].states.back(), grid).state;
        const auto fine = to_eulerian(lagr[k + 1].states.back(), grid).state;
        dl.push_back(numerics::max_abs_diff(coarse.m, fine.m));
    }
    report.eulerian_orders = orders_of(de);
    report.lagrangian_orders = orders_of(dl);

    if (config.jitter > 0.0 && !report.audit.events.empty()) {
        report.label_grid = label_grid_experiment(config, config.levels);
    }
    if (finest) *finest = {std::move(euler.back()), std::move(lagr.back())};
    return report;
}

}  // namespace moch
