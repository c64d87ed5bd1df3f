#include "moch/greens.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "moch/errors.hpp"
#include "moch/numerics.hpp"

namespace moch::greens {

IntervalWeights interval_weights(double h) {
    const double em = std::expm1(-h);  // exp(-h) - 1
    const double total = -em;          // 1 - exp(-h)
    double far = 0.0;
    if (h < 1e-3) {
        // sum_{k>=2} (-1)^k (k-1) h^(k-1) / k!
        far = h * (1.0 / 2.0 - h * (1.0 / 3.0 - h * (1.0 / 8.0 - h * (1.0 / 30.0 - h / 144.0))));
    } else {
        far = (total - h * (1.0 + em)) / h;
    }
    return {1.0 + em, far, total - far};
}

SampledFunction::SampledFunction(std::vector<double> abscissae, std::vector<double> values)
    : abscissae_(std::move(abscissae)), values_(std::move(values)) {
    if (abscissae_.size() != values_.size()) {
        throw InvalidInput("abscissae and values differ in length (" + std::to_string(abscissae_.size()) +
                           " vs " + std::to_string(values_.size()) + ")");
    }
    for (std::size_t i = 1; i < abscissae_.size(); ++i) {
        if (!(abscissae_[i] > abscissae_[i - 1])) {
            throw InvalidInput("abscissae not strictly increasing at index " + std::to_string(i));
        }
    }
    if (!numerics::all_finite(abscissae_) || !numerics::all_finite(values_)) {
        throw InvalidInput("sampled function contains non-finite entries");
    }
}

KernelResult conv_kernel(const SampledFunction& f) {
    const auto x = f.abscissae();
    const auto v = f.values();
    const std::size_t n = f.size();
    KernelResult out;
    out.even_part.assign(n, 0.0);
    out.odd_part.assign(n, 0.0);
    if (n == 0) return out;

    std::vector<IntervalWeights> w(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i + 1 < n; ++i) w[i] = interval_weights(x[i + 1] - x[i]);

    // left[i] = int_{y < x_i} exp(-(x_i - y)) f(y) dy
    std::vector<double> left(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        left[i + 1] = w[i].decay * left[i] + w[i].far * v[i] + w[i].near * v[i + 1];
    }
    // right[i] = int_{y > x_i} exp(-(y - x_i)) f(y) dy
    std::vector<double> right(n, 0.0);
    for (std::size_t i = n - 1; i-- > 0;) {
        right[i] = w[i].decay * right[i + 1] + w[i].far * v[i + 1] + w[i].near * v[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        out.even_part[i] = 0.5 * (left[i] + right[i]);
        out.odd_part[i] = 0.5 * (right[i] - left[i]);
    }
    out.truncation_estimate = std::exp(-0.5 * (x[n - 1] - x[0])) * numerics::max_abs(v);
    return out;
}

KernelResult conv_kernel_arclength(std::span<const double> arclength, std::span<const double> weights) {
    const std::size_t n = arclength.size();
    if (weights.size() != n) throw InvalidInput("arclength and weights differ in length");
    for (std::size_t i = 1; i < n; ++i) {
        if (arclength[i] < arclength[i - 1]) {
            throw InvalidInput("arclength decreases at index " + std::to_string(i));
        }
    }
    if (!numerics::all_finite(weights) || !numerics::all_finite(arclength)) {
        throw InvalidInput("arclength kernel input contains non-finite entries");
    }
    KernelResult out;
    out.even_part.assign(n, 0.0);
    out.odd_part.assign(n, 0.0);
    if (n == 0) return out;

    std::vector<double> decay(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i + 1 < n; ++i) decay[i] = std::exp(-(arclength[i + 1] - arclength[i]));

    std::vector<double> left(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) left[i + 1] = decay[i] * (left[i] + weights[i]);
    std::vector<double> right(n, 0.0);
    for (std::size_t i = n - 1; i-- > 0;) right[i] = decay[i] * (right[i + 1] + weights[i + 1]);

    for (std::size_t i = 0; i < n; ++i) {
        out.even_part[i] = left[i] + weights[i] + right[i];
        out.odd_part[i] = right[i] - left[i];
    }
    double wmax = numerics::max_abs(weights);
    out.truncation_estimate = std::exp(-0.5 * (arclength[n - 1] - arclength[0])) * wmax;
    return out;
}

KernelResult conv_kernel_arclength_linear(std::span<const double> arclength, std::span<const double> beta,
                                          std::span<const double> integrand) {
    const std::size_t n = arclength.size();
    if (beta.size() != n || integrand.size() != n) throw InvalidInput("arclength, beta and integrand differ in length");
    if (!numerics::all_finite(arclength) || !numerics::all_finite(beta) || !numerics::all_finite(integrand)) {
        throw InvalidInput("arclength kernel input contains non-finite entries");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (arclength[i] < arclength[i - 1]) throw InvalidInput("arclength decreases at index " + std::to_string(i));
        if (!(beta[i] > beta[i - 1])) throw InvalidInput("beta not increasing at index " + std::to_string(i));
    }
    KernelResult out;
    out.even_part.assign(n, 0.0);
    out.odd_part.assign(n, 0.0);
    if (n == 0) return out;

    // interval_weights per unit arclength, so that a plateau (h = 0) gives the
    // trapezoid weights 1/2, 1/2
    std::vector<IntervalWeights> w(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = arclength[i + 1] - arclength[i];
        const double len = beta[i + 1] - beta[i];
        if (h < 1e-3) {
            const double far = 0.5 - h * (1.0 / 3.0 - h * (1.0 / 8.0 - h * (1.0 / 30.0 - h / 144.0)));
            const double total = 1.0 - h * (0.5 - h * (1.0 / 6.0 - h * (1.0 / 24.0 - h / 120.0)));
            w[i] = {std::exp(-h), len * far, len * (total - far)};
        } else {
            const auto iw = interval_weights(h);
            w[i] = {iw.decay, len * iw.far / h, len * iw.near / h};
        }
    }
    std::vector<double> left(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        left[i + 1] = w[i].decay * left[i] + w[i].far * integrand[i] + w[i].near * integrand[i + 1];
    }
    std::vector<double> right(n, 0.0);
    for (std::size_t i = n - 1; i-- > 0;) {
        right[i] = w[i].decay * right[i + 1] + w[i].far * integrand[i + 1] + w[i].near * integrand[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        out.even_part[i] = left[i] + right[i];
        out.odd_part[i] = right[i] - left[i];
    }
    out.truncation_estimate = std::exp(-0.5 * (arclength[n - 1] - arclength[0])) * numerics::max_abs(integrand);
    return out;
}

double helmholtz_residual(const SampledFunction& f, const KernelResult& r) {
    const auto x = f.abscissae();
    const auto v = f.values();
    const auto& e = r.even_part;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        const double hl = x[i] - x[i - 1];
        const double hr = x[i + 1] - x[i];
        const double second = 2.0 * ((e[i + 1] - e[i]) / hr - (e[i] - e[i - 1]) / hl) / (hl + hr);
        worst = std::max(worst, std::abs(e[i] - second - v[i]));
    }
    return worst;
}

}  // namespace moch::greens
