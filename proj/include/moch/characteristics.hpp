#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "moch/energy_measure.hpp"
#include "moch/eulerian.hpp"
#include "moch/lagrangian.hpp"

// Energy coordinates and characteristic tracing by fixed-point iteration.
//
// At every stored time the map x -> beta(x) = x + mu((-inf, x]) is built
// from the energy measure. A characteristic is the curve along which beta
// solves beta(t) = beta(0) + int_0^t G(s, beta(s)) ds, with
// G(t, beta) = int_{-inf}^{x(t, beta)} (u_x + 2E) dx, the energy part of 2E
// being integrated against the measure.
namespace moch {

/// One time level of the tracing data, stored as knots in beta with x
/// nondecreasing (flat across atoms) and G, m, u, F alongside. Queries
/// interpolate linearly between knots. Immutable once built.
class Snapshot {
public:
    /// Knots at the grid nodes plus a run of knots across every atom. G is
    /// the trapezoid integral of u_x + 2E + N (m_x^2 - density), so that the
    /// energy enters through the measure. Across an atom of mass M, G drops
    /// by the integral of N over the swept mass, with N moving through the
    /// atom's own jump of P3x. Throws InvalidInput if the measure grid
    /// differs from the state grid or an atom lies outside it.
    Snapshot(const EulerianState& state, const EnergyMeasure& measure, double lambda,
             CoefficientSet set = CoefficientSet::rederived);

    /// Snapshot whose measure is m_x^2 dx (no atoms).
    static Snapshot smooth(const EulerianState& state, double lambda,
                           CoefficientSet set = CoefficientSet::rederived);

    /// Knots at the nodes of a Lagrangian state, carrying the solver's own G.
    static Snapshot from_lagrangian(const LagrangianState& state,
                                    CoefficientSet set = CoefficientSet::rederived);

    [[nodiscard]] double time() const { return time_; }

    /// Right-continuous: on a plateau of x (an atom) the largest beta.
    /// Throws DomainError outside [x_min, x_max].
    [[nodiscard]] double beta_at(double x) const;

    /// Throws DomainError outside [beta_min, beta_max] (up to rounding).
    [[nodiscard]] double x_at(double beta) const;
    [[nodiscard]] double G_at(double beta) const;
    [[nodiscard]] double m_at(double beta) const;
    [[nodiscard]] double u_at(double beta) const;
    [[nodiscard]] double F_at(double beta) const;

    /// Largest |dG/dbeta| of the interpolant.
    [[nodiscard]] double G_lipschitz() const;
    /// max |u| over the knots.
    [[nodiscard]] double max_speed() const;
    /// int |F| dx.
    [[nodiscard]] double source_mass() const;

    [[nodiscard]] double beta_min() const { return beta_.front(); }
    [[nodiscard]] double beta_max() const { return beta_.back(); }
    [[nodiscard]] double x_min() const { return x_.front(); }
    [[nodiscard]] double x_max() const { return x_.back(); }
    [[nodiscard]] std::size_t knot_count() const { return beta_.size(); }

private:
    Snapshot() = default;
    [[nodiscard]] double along_beta(const std::vector<double>& f, double beta) const;

    double time_ = 0.0;
    std::vector<double> beta_, x_, G_, m_, u_, F_;
};

double beta_coordinate(const Snapshot& snapshot, double x);
double x_of_beta(const Snapshot& snapshot, double beta);
double G_functional(const Snapshot& snapshot, double beta);

/// Snapshots at uniformly spaced times starting at 0.
struct TracingData {
    std::vector<Snapshot> snapshots;

    [[nodiscard]] std::vector<double> times() const;
    /// Throws InvalidInput if empty or the times are not uniform and increasing.
    void validate() const;
};

TracingData tracing_data(const EulerianTrajectory& trajectory);
TracingData tracing_data(const LagrangianTrajectory& trajectory);

struct Bounds {
    /// sup |u|
    double C_inf = 0.0;
    /// sup over time of int |F| dx
    double C_S = 0.0;
    /// sup of the Lipschitz constant of G in beta
    double C_G = 0.0;
};

Bounds measure_bounds(const TracingData& data);

struct PicardOptions {
    std::size_t max_iterations = 200;
    double tolerance = 1e-10;
    /// Overrides the measured C_G in the weight exp(-2 C t).
    std::optional<double> weight_constant;
    /// Starting iterate on the time mesh; constant beta(0) when absent.
    std::optional<std::vector<double>> initial_iterate;
};

struct Trace {
    std::vector<double> t;
    std::vector<double> beta;
    std::vector<double> x;
    std::vector<double> m;
    /// ||b_{k+1} - b_k|| / ||b_k - b_{k-1}|| in the weighted sup norm, one per
    /// iteration from the second on.
    std::vector<double> contraction_factors;
    std::vector<double> updates;
    std::size_t iterations = 0;
    double weight_constant = 0.0;
    /// max over mesh intervals of |dx/dt - mean of u at both ends|.
    double velocity_residual = 0.0;
};

/// Fixed point of beta -> beta(0) + int_0^t G(s, beta(s)) ds on the stored
/// time mesh up to `horizon` (trapezoid rule), starting from x = y0 at
/// t = 0. Throws DomainError if y0 or an iterate leaves the data and
/// ConvergenceFailure when the update does not fall below the tolerance
/// within max_iterations.
Trace picard_trace(const TracingData& data, double y0, double horizon, const PicardOptions& options = {});

/// Spread (max - min) over the mesh of m(t) - m(0) - int_0^t F ds along the
/// trace, i.e. the largest violation of the identity between two mesh times.
double characteristic_identity_residual(const TracingData& data, const Trace& trace);

}  // namespace moch
