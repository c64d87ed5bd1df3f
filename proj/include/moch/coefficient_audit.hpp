#pragma once

#include <vector>

#include "moch/eulerian.hpp"

// Independent route to m_t: advance the gamma equation
//   gamma_t + v gamma_x = gamma^2/2 + lambda v - gamma v_x,
//   (d^2/dx^2 - 1) v = gamma_x + gamma^2/(2 lambda),
// directly and map the result back through gamma_to_m.
namespace moch {

/// gamma_t of the equation above; v = -p * (gamma_x + gamma^2/(2 lambda)).
std::vector<double> gamma_rhs(const GammaField& gamma, double lambda);

/// One classical RK4 step of the gamma equation.
GammaField step_gamma(const GammaField& gamma, double dt, double lambda);

struct CoefficientAuditResult {
    CoefficientSet set = CoefficientSet::rederived;
    /// max |rhs_eulerian(m0) - (m(dt) - m(0)) / dt| over the interior.
    double mismatch = 0.0;
    /// max |rhs_eulerian(m0)|, for scale.
    double rhs_scale = 0.0;
};

/// Compares rhs_eulerian with the finite-difference time derivative of the
/// direct gamma solver started from m_to_gamma(m0). Nodes within `margin`
/// of either edge are excluded.
CoefficientAuditResult audit_coefficients(const EulerianState& m0, double lambda, double dt,
                                          CoefficientSet set, double margin = 2.0);

}  // namespace moch
