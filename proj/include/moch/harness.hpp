#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "moch/config.hpp"
#include "moch/eulerian.hpp"
#include "moch/lagrangian.hpp"

// Verification experiments built on top of the two solvers.
namespace moch {

/// Worker count from MOCH_THREADS (default: hardware concurrency, at least 1).
std::size_t thread_count();

/// Runs body(0..n-1) on up to thread_count() threads. The first exception
/// thrown by any task is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Smooth bump b((t - t_center)/t_radius) * b((x - x_center)/x_radius) with
/// b(s) = exp(-1/(1 - s^2)) on |s| < 1.
struct BumpFunction {
    double t_center = 0.0;
    double t_radius = 1.0;
    double x_center = 0.0;
    double x_radius = 1.0;

    [[nodiscard]] double value(double t, double x) const;
    [[nodiscard]] double d_t(double t, double x) const;
    [[nodiscard]] double d_x(double t, double x) const;
};

/// Five bumps centred at T/2 with time radius 0.45 T and spatial centres
/// -2, -1, 0, 1, 2 (radius 1.5).
std::vector<BumpFunction> standard_bumps(double T);

struct WeakFormResidual {
    /// int int (w phi_t + u w phi_x + 2E phi), w = m_x^2.
    std::vector<double> balance;
    /// int int (gamma phi_t + v gamma phi_x + (gamma^2/2 + lambda v) phi), with
    /// gamma = m_x - m and v = -(p * gamma)_x - p * gamma^2 / (2 lambda).
    std::vector<double> gamma_form;
};

/// One residual per test function, by trapezoid quadrature in x and t over
/// the stored states. Throws InvalidInput when a support leaves the box
/// spanned by the grid and the stored times, or the times are not uniform.
WeakFormResidual weak_form_residual(const EulerianTrajectory& trajectory, const std::vector<BumpFunction>& tests);

struct LipschitzAudit {
    /// max dx/dbeta between neighbouring nodes (bound 1).
    double x_ratio = 0.0;
    /// max |dm|/dbeta between neighbouring nodes (bound 1/2).
    double m_ratio = 0.0;
    /// max |dx/dt| of a node between stored states (bound C_inf + C_S).
    double speed = 0.0;
    double C_inf = 0.0;
    double C_S = 0.0;
    double slack = 0.0;

    [[nodiscard]] bool x_ok() const { return x_ratio <= 1.0 + slack; }
    [[nodiscard]] bool m_ok() const { return m_ratio <= 0.5 + slack; }
    [[nodiscard]] bool speed_ok() const { return speed <= (C_inf + C_S) * (1.0 + slack); }
    [[nodiscard]] bool passed() const { return x_ok() && m_ok() && speed_ok(); }
};

LipschitzAudit lipschitz_audit(const LagrangianTrajectory& trajectory, double slack = 1e-2);

/// Audits that depend only on a pair of stored trajectories.
struct TrajectoryAudit {
    std::vector<double> times;
    /// sup_x |m_euler - m_lagrangian pulled back| at each common stored time.
    std::vector<double> sup_error;
    LipschitzAudit lipschitz;
    /// Integral over [0, T] of |d/dt int m_x^2 - int 2E| on the Eulerian run.
    double energy_residual = 0.0;
    /// max over nodes and stored states of |dx/dbeta - cos^2(theta/2)|, both
    /// averaged over a node interval.
    double arc_identity = 0.0;
    /// max |theta_rate + 1| over breaking events (0 without events).
    double breaking_rate_error = 0.0;
    std::vector<BreakingEvent> events;
    BlowupReport blowup;
};

TrajectoryAudit audit_trajectories(const EulerianTrajectory& eulerian, const LagrangianTrajectory& lagrangian,
                                   double slack);

struct LabelGridResult {
    std::vector<std::size_t> nodes;
    /// sup_x of the difference between the pulled-back m of the uniform and
    /// the jittered label grids at the final time, per node count.
    std::vector<double> difference;
    std::vector<double> orders;
    std::size_t breaking_events = 0;
};

/// Lagrangian runs with uniform and jittered labels at node counts
/// nodes / 2^(levels-1), ..., nodes; compared on the Eulerian grid of N points.
LabelGridResult label_grid_experiment(const RunConfig& config, std::size_t levels = 2);

struct ComparisonReport {
    std::vector<std::size_t> level_N;
    std::vector<std::size_t> level_nodes;
    /// max over stored times of the solver difference, per level.
    std::vector<double> level_error;
    /// log2 of successive level_error ratios.
    std::vector<double> equivalence_orders;
    /// Self-convergence orders of the final state for each solver.
    std::vector<double> eulerian_orders;
    std::vector<double> lagrangian_orders;
    /// Audit of the finest level.
    TrajectoryAudit audit;
    std::optional<LabelGridResult> label_grid;
    double equivalence_tolerance = 0.0;

    [[nodiscard]] double finest_error() const { return level_error.empty() ? 0.0 : level_error.back(); }
    [[nodiscard]] bool passed() const;
};

/// Runs both solvers at config.levels resolutions (the finest being N and
/// nodes, each coarser one halving both) from the same initial data.
/// Throws ConfigurationError for fewer than 3 levels. When `finest` is
/// given, it receives the trajectories of the finest level.
ComparisonReport compare_solvers(const RunConfig& config,
                                 std::pair<EulerianTrajectory, LagrangianTrajectory>* finest = nullptr);

}  // namespace moch
