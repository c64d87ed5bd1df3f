#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "moch/energy_measure.hpp"
#include "moch/eulerian.hpp"

// The semilinear system in characteristic coordinates. Each node follows one
// characteristic: beta is its energy coordinate x + mu((-inf, x]), theta the
// angle 2 arctan m_x, so that x_beta = cos^2(theta/2). The system stays
// well posed when theta reaches pi (m_x -> -inf), i.e. through wave breaking.
namespace moch {

struct LagrangianState {
    /// Fixed characteristic identities (the initial beta).
    std::vector<double> labels;
    std::vector<double> beta;
    std::vector<double> x;
    std::vector<double> m;
    /// In (-pi, pi].
    std::vector<double> theta;
    double time = 0.0;
    double lambda = 1.0;

    [[nodiscard]] std::size_t size() const { return labels.size(); }
};

/// Throws InvalidInput on size mismatch, non-finite entries or beta not
/// strictly increasing.
void validate(const LagrangianState& s);

struct LagrangianCoefficients {
    std::vector<double> arclength;
    std::vector<double> P1, P2, P3, P4, P5;
    std::vector<double> P1x, P2x, P3x, P4x, P5x;
    std::vector<double> u, F, N, P, G;
};

/// Builds the label map beta(y) = y + int_{-inf}^y m0_x^2, places
/// `node_count` labels on its range (uniform, or with interior labels moved
/// by up to `jitter` spacings, jitter < 0.5) and inverts it.
LagrangianState init_lagrangian(const EulerianState& m0, std::size_t node_count, double lambda,
                                double jitter = 0.0, std::uint64_t seed = 0);

/// s_i = int_{beta_0}^{beta_i} cos^2(theta/2) dbeta by the trapezoid rule.
std::vector<double> cumulative_arc(const LagrangianState& state);

LagrangianCoefficients compute_fields_lagrangian(const LagrangianState& state,
                                                 CoefficientSet set = CoefficientSet::rederived);

struct LagrangianRates {
    std::vector<double> beta, x, m, theta;
};

/// beta' = G, x' = u, m' = F, theta' = 2 cos^2(theta/2) P - N sin(theta) - sin^2(theta/2).
LagrangianRates rhs_lagrangian(const LagrangianState& state, const LagrangianCoefficients& c);

/// A group of adjacent nodes whose theta crossed pi during one step.
struct BreakingEvent {
    double time = 0.0;
    double x_location = 0.0;
    double label_lo = 0.0;
    double label_hi = 0.0;
    std::size_t node_lo = 0;
    std::size_t node_hi = 0;
    /// One-step finite difference of the unwrapped theta at node_lo.
    double theta_rate = 0.0;
};

struct LagrangianSettings {
    CoefficientSet set = CoefficientSet::rederived;
    /// Number of times a step may be halved when beta loses monotonicity.
    int max_halvings = 8;
};

struct LagrangianStepResult {
    LagrangianState state;
    std::vector<BreakingEvent> events;
    /// Smallest sub-step actually taken.
    double smallest_dt = 0.0;
};

/// RK4 with coefficients refreshed per stage. Throws SolverFailure when the
/// monotonicity of beta cannot be restored within max_halvings.
LagrangianStepResult step_lagrangian(const LagrangianState& state, double dt,
                                     const LagrangianSettings& settings = {});

struct LagrangianTrajectory {
    double lambda = 1.0;
    CoefficientSet set = CoefficientSet::rederived;
    double dt = 0.0;
    std::vector<LagrangianState> states;
    std::vector<BreakingEvent> events;
};

LagrangianTrajectory simulate_lagrangian(const LagrangianState& initial, double dt, double t_final,
                                         std::size_t output_every, const LagrangianSettings& settings = {});

struct Pullback {
    EulerianState state;
    EnergyMeasure measure;
};

/// m on `grid` by linear interpolation of (x_i, m_i); energy measure by
/// transferring int sin^2(theta/2) dbeta of every node interval onto the
/// grid cells. Intervals with x-length <= plateau_tolerance * beta-length
/// become atoms (adjacent ones merged).
Pullback to_eulerian(const LagrangianState& state, const UniformGrid& grid, double plateau_tolerance = 1e-6);

}  // namespace moch
