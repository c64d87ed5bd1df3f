#include "moch/coefficient_audit.hpp"

#include <algorithm>
#include <cmath>

#include "moch/greens.hpp"
#include "moch/numerics.hpp"

namespace moch {

std::vector<double> gamma_rhs(const GammaField& gamma, double lambda) {
    const auto& g = gamma.gamma;
    const std::size_t n = g.size();
    const auto x = gamma.grid.abscissae();
    std::vector<double> g2(n);
    for (std::size_t i = 0; i < n; ++i) g2[i] = g[i] * g[i];
    const auto kg = greens::conv_kernel(greens::SampledFunction(x, g));
    const auto kg2 = greens::conv_kernel(greens::SampledFunction(x, g2));
    const auto gx = numerics::centered_derivative(g, gamma.grid.spacing);

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        // p * gamma_x = (p * gamma)_x and (p * f)_xx = p * f - f
        const double v = -(kg.odd_part[i] + kg2.even_part[i] / (2.0 * lambda));
        const double vx = -((kg.even_part[i] - g[i]) + kg2.odd_part[i] / (2.0 * lambda));
        out[i] = 0.5 * g2[i] + lambda * v - g[i] * vx - v * gx[i];
    }
    return out;
}

GammaField step_gamma(const GammaField& gamma, double dt, double lambda) {
    auto shifted = [&](const std::vector<double>& k, double a) {
        GammaField s = gamma;
        for (std::size_t i = 0; i < s.gamma.size(); ++i) s.gamma[i] += a * k[i];
        return s;
    };
    const auto k1 = gamma_rhs(gamma, lambda);
    const auto k2 = gamma_rhs(shifted(k1, 0.5 * dt), lambda);
    const auto k3 = gamma_rhs(shifted(k2, 0.5 * dt), lambda);
    const auto k4 = gamma_rhs(shifted(k3, dt), lambda);
    GammaField out = gamma;
    for (std::size_t i = 0; i < out.gamma.size(); ++i) {
        out.gamma[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out.time += dt;
    return out;
}

CoefficientAuditResult audit_coefficients(const EulerianState& m0, double lambda, double dt,
                                          CoefficientSet set, double margin) {
    const auto gamma0 = m_to_gamma(m0);
    const auto gamma1 = step_gamma(gamma0, dt, lambda);
    // Both ends go through the same inversion so its O(dx^2) bias cancels.
    const auto start = gamma_to_m(gamma0, 1.0).state;
    const auto end = gamma_to_m(gamma1, 1.0).state;
    const auto rhs = rhs_eulerian(m0, lambda, set);

    CoefficientAuditResult r;
    r.set = set;
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        const double x = m0.grid.x(i);
        if (x < m0.grid.front() + margin || x > m0.grid.back() - margin) continue;
        const double fd = (end.m[i] - start.m[i]) / dt;
        r.mismatch = std::max(r.mismatch, std::abs(fd - rhs[i]));
        r.rhs_scale = std::max(r.rhs_scale, std::abs(rhs[i]));
    }
    return r;
}

}  // namespace moch
