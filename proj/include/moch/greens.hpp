#pragma once

#include <span>
#include <vector>

// Convolutions with the Green's kernel p(x) = exp(-|x|)/2 of (1 - d^2/dx^2).
//
// Both entry points split the integral at the evaluation point into a left
// and a right one-sided part and sweep each with a first-order recurrence,
// so the cost is linear in the node count.
namespace moch::greens {

/// Samples of a real function on strictly increasing abscissae.
class SampledFunction {
public:
    /// Throws InvalidInput on size mismatch, non-increasing abscissae or
    /// non-finite samples.
    SampledFunction(std::vector<double> abscissae, std::vector<double> values);

    [[nodiscard]] std::span<const double> abscissae() const { return abscissae_; }
    [[nodiscard]] std::span<const double> values() const { return values_; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }

private:
    std::vector<double> abscissae_;
    std::vector<double> values_;
};

/// Exact integral of exp(-(h - s)) * (a (1 - s/h) + b s/h) over [0, h]
/// equals a * far + b * near; decay = exp(-h). Mirroring the interval
/// swaps far and near.
struct IntervalWeights {
    double decay;
    double far;
    double near;
};

IntervalWeights interval_weights(double h);

struct KernelResult {
    /// p * f at every node.
    std::vector<double> even_part;
    /// d/dx (p * f), i.e. the convolution with -sgn(x) exp(-|x|)/2.
    std::vector<double> odd_part;
    /// exp(-half_span) * max|f|: size of the neglected far field for data
    /// that is not negligible outside the grid. Diagnostic only.
    double truncation_estimate = 0.0;
};

/// p * f and its derivative, with f piecewise linear between nodes and
/// zero outside them, integrated exactly against the kernel.
KernelResult conv_kernel(const SampledFunction& f);

/// Discrete kernel sums over a nondecreasing arclength s:
///   even[i] = sum_j exp(-|s_i - s_j|) w_j
///   odd[i]  = sum_{j>i} exp(-|s_i - s_j|) w_j - sum_{j<i} exp(-|s_i - s_j|) w_j
/// No factor 1/2 is applied. Zero-length intervals have decay factor 1.
/// Throws InvalidInput if s decreases, sizes differ or weights are non-finite.
KernelResult conv_kernel_arclength(std::span<const double> arclength, std::span<const double> weights);

/// Integral form of the arclength sums: g is piecewise linear in beta and s
/// linear in beta on every interval, and
///   even[i] = int exp(-|s_i - s(b)|) g(b) db
///   odd[i]  = int sgn(b - beta_i) exp(-|s_i - s(b)|) g(b) db
/// are integrated exactly, again without the factor 1/2. Unlike the node
/// sums, odd changes by O(beta_{i+1} - beta_i) across an interval whatever
/// the neighbouring spacings are. Throws InvalidInput if s decreases, beta
/// does not increase, sizes differ or inputs are non-finite.
KernelResult conv_kernel_arclength_linear(std::span<const double> arclength, std::span<const double> beta,
                                          std::span<const double> integrand);

/// max over interior nodes of |(even - D2 even) - f|, D2 the three-point
/// second difference. Zero for fewer than three nodes.
double helmholtz_residual(const SampledFunction& f, const KernelResult& r);

}  // namespace moch::greens
