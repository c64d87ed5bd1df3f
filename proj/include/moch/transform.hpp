#pragma once

#include <vector>

#include "moch/grid.hpp"

// Change of unknown between gamma and m = (d/dx - 1)^{-1} gamma.
namespace moch {

/// The working variable m sampled on a uniform grid at one time.
struct EulerianState {
    UniformGrid grid;
    std::vector<double> m;
    double time = 0.0;
};

/// The original variable gamma = m_x - m on a uniform grid.
struct GammaField {
    UniformGrid grid;
    std::vector<double> gamma;
    double time = 0.0;
};

/// Throws InvalidInput on a bad grid, size mismatch or non-finite samples.
void validate(const EulerianState& s);

struct InversionResult {
    EulerianState state;
    /// max |D m - m - gamma| with D the centered difference used by m_to_gamma.
    double residual = 0.0;
};

/// Solves m' - m = gamma with m -> 0 at +infinity:
///   m(x) = -int_x^inf exp(x - y) gamma(y) dy,
/// gamma piecewise linear and zero beyond the right edge. Throws
/// BoundaryTruncationError when |gamma| at either edge exceeds
/// edge_tolerance * max(1, max|gamma|).
InversionResult gamma_to_m(const GammaField& gamma, double edge_tolerance = 1e-6);

/// gamma = D m - m, D centered (one-sided second order at the edges).
GammaField m_to_gamma(const EulerianState& m);

/// Discrete H1 norm sqrt(int m^2 + m_x^2) by trapezoid with centered m_x.
double h1_norm(const EulerianState& s);
double l2_norm(const UniformGrid& grid, const std::vector<double>& f);

}  // namespace moch
