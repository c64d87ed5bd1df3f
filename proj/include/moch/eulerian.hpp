#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "moch/energy_measure.hpp"
#include "moch/transform.hpp"

// Method-of-lines solver for m_t + u m_x = F up to wave breaking.
namespace moch {

/// Which closed-form expressions for u, F, N and E are used.
///   rederived  - obtained by substituting gamma = (d/dx - 1) m into the
///                gamma equation with G = d^2/dx^2 - 1 (default).
///   as_printed - alternative signs in several terms, kept for the coefficient audit.
enum class CoefficientSet { rederived, as_printed };

std::string_view to_string(CoefficientSet set);
/// Accepts "rederived" / "as_printed" (also "as-printed"); throws ConfigurationError.
CoefficientSet parse_coefficient_set(std::string_view name);

/// One time slice of every nonlocal potential and derived field on a grid.
/// P_i = p * f_i with f = (m, m^2, m_x^2, H, P3); Pix their x-derivatives
/// from the odd kernel.
struct Coefficients {
    std::vector<double> P1, P2, P3, P4, P5;
    std::vector<double> P1x, P2x, P3x, P4x, P5x;
    std::vector<double> mx, u, ux, H, F, E, N, P;
    double lambda = 1.0;
    CoefficientSet set = CoefficientSet::rederived;
};

/// Throws ParameterError if lambda == 0, InvalidInput on a malformed state.
Coefficients compute_fields(const EulerianState& m, double lambda,
                            CoefficientSet set = CoefficientSet::rederived);

/// Same, with the energy m_x^2 dx in P3 (and through it P5, F, N, P) replaced
/// by the measure: density plus atoms. Needed for states pulled back from
/// the Lagrangian solver after breaking, where m_x^2 on the grid misses
/// concentrated energy.
Coefficients compute_fields(const EulerianState& m, const EnergyMeasure& energy, double lambda,
                            CoefficientSet set = CoefficientSet::rederived);

/// m_t = F - u m_x with centered m_x.
std::vector<double> rhs_eulerian(const EulerianState& m, double lambda,
                                 CoefficientSet set = CoefficientSet::rederived);

struct BlowupReport {
    bool detected = false;
    double time = 0.0;
    double location = 0.0;
    double max_slope = 0.0;
};

struct EulerianSettings {
    double lambda = 1.0;
    CoefficientSet set = CoefficientSet::rederived;
    /// max|m_x| beyond which the smooth regime is considered over.
    double blowup_threshold = 1e3;
    /// dt must satisfy dt <= stability_factor * dx / max|u|.
    double stability_factor = 1.0;
};

struct StepResult {
    EulerianState state;
    BlowupReport blowup;
};

/// Classical RK4 step. Throws ConfigurationError if dt violates the
/// advective bound; a non-finite result is reported as blow-up with
/// max_slope = inf.
StepResult step_eulerian(const EulerianState& state, double dt, const EulerianSettings& settings);

struct EulerianTrajectory {
    double lambda = 1.0;
    CoefficientSet set = CoefficientSet::rederived;
    double dt = 0.0;
    std::vector<EulerianState> states;
    /// First detection, if any; the run stops at the detecting step.
    BlowupReport blowup;
};

/// Integrates from m0 to t_final with fixed dt (the last step is shortened
/// to land on t_final), storing every `output_every`-th state plus the
/// initial and final ones.
EulerianTrajectory simulate_eulerian(const EulerianState& m0, double dt, double t_final,
                                     std::size_t output_every, const EulerianSettings& settings);

/// |d/dt int m_x^2 - int 2E| at every stored time. The time derivative is a
/// fourth-order finite difference over the stored (uniformly spaced) times.
std::vector<double> energy_balance_residual(const EulerianTrajectory& trajectory);

/// Trapezoid integral over [0, T] of energy_balance_residual.
double integrated_energy_residual(const EulerianTrajectory& trajectory);

}  // namespace moch
