#pragma once

#include "moch/eulerian.hpp"

// Pointwise closure relations shared by the Eulerian and Lagrangian solvers.
// Inputs are the kernel potentials at one point; no derivative of m enters.
namespace moch::closure {

/// Values of the five potentials and their x-derivatives at one point.
struct Potentials {
    double P1 = 0, P2 = 0, P3 = 0, P4 = 0, P5 = 0;
    double P1x = 0, P2x = 0, P3x = 0, P4x = 0, P5x = 0;
};

inline double velocity(CoefficientSet set, double lambda, double m, const Potentials& p) {
    const double quad = (p.P3 + p.P2 - p.P2x) / (2.0 * lambda);
    if (set == CoefficientSet::as_printed) return m - p.P1x + p.P1 + quad;
    return m + p.P1x - p.P1 - quad;
}

/// Right-hand side F of m_t + u m_x = F. Needs P4, P5 built from this u.
inline double source(CoefficientSet set, double lambda, double m, double u, const Potentials& p) {
    if (set == CoefficientSet::as_printed) {
        return m * u - p.P4 - p.P4x + 0.5 * (-m * m + p.P3 + p.P3x) + lambda * p.P1x +
               0.5 * (p.P5 + p.P5x - p.P2);
    }
    return m * u + p.P4 + p.P4x - 0.5 * (m * m + p.P3 + p.P3x) - lambda * p.P1x +
           0.5 * (p.P2 + p.P5 + p.P5x);
}

/// N = u_x - m_x: the part of u_x that stays bounded when m_x blows up.
inline double slope_coefficient(CoefficientSet set, double lambda, double m, const Potentials& p) {
    if (set == CoefficientSet::as_printed) {
        return -m - p.P1 - p.P1x + (-p.P2 + p.P3x + p.P2x - m * m) / (2.0 * lambda);
    }
    return p.P1 - m - p.P1x - (p.P3x + p.P2x - p.P2 + m * m) / (2.0 * lambda);
}

/// P = F + m N + lambda u + m^2 / 2, so that d/dt m_x = P - N m_x - m_x^2 / 2
/// along characteristics.
inline double forcing(double lambda, double m, double u, double F, double N) {
    return F + m * N + lambda * u + 0.5 * m * m;
}

}  // namespace moch::closure
