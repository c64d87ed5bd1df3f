#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Small discrete-calculus helpers shared by the solvers.
namespace moch::numerics {

/// Centered second-order first derivative on a uniform grid, second-order
/// one-sided stencils at both ends.
std::vector<double> centered_derivative(std::span<const double> f, double h);

/// Same, for strictly increasing (possibly nonuniform) abscissae.
std::vector<double> derivative(std::span<const double> x, std::span<const double> f);

/// Prefix trapezoid integral: out[0] = 0, out[i] = int_{x_0}^{x_i} f.
std::vector<double> cumulative_trapezoid(std::span<const double> x, std::span<const double> f);
std::vector<double> cumulative_trapezoid(std::span<const double> f, double h);

double trapezoid(std::span<const double> f, double h);
double trapezoid(std::span<const double> x, std::span<const double> f);

/// Trapezoid weights for nonuniform nodes: sum_i w_i f_i approximates int f.
std::vector<double> trapezoid_weights(std::span<const double> x);

/// Piecewise-linear interpolation at `at` on nondecreasing abscissae `x`;
/// constant extrapolation outside [x.front(), x.back()].
double interpolate(std::span<const double> x, std::span<const double> f, double at);

/// Piecewise-linear interpolation on a uniform grid.
double interpolate_uniform(double origin, double h, std::span<const double> f, double at);

double max_abs(std::span<const double> f);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
bool all_finite(std::span<const double> f);

}  // namespace moch::numerics
