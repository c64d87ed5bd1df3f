#include "moch/transform.hpp"

#include <cmath>
#include <sstream>

#include "moch/errors.hpp"
#include "moch/greens.hpp"
#include "moch/numerics.hpp"

namespace moch {

void validate(const EulerianState& s) {
    s.grid.validate();
    if (s.m.size() != s.grid.count) throw InvalidInput("state length does not match grid");
    if (!numerics::all_finite(s.m)) throw InvalidInput("state contains non-finite values");
}

InversionResult gamma_to_m(const GammaField& gamma, double edge_tolerance) {
    gamma.grid.validate();
    const auto& g = gamma.gamma;
    const std::size_t n = gamma.grid.count;
    if (g.size() != n) throw InvalidInput("gamma length does not match grid");
    if (!numerics::all_finite(g)) throw InvalidInput("gamma contains non-finite values");

    const double scale = std::max(1.0, numerics::max_abs(g));
    const double edge = std::max(std::abs(g.front()), std::abs(g.back()));
    if (edge > edge_tolerance * scale) {
        std::ostringstream msg;
        msg << "gamma does not decay at the grid edges (|gamma| = " << edge << ")";
        throw BoundaryTruncationError(msg.str());
    }

    const auto w = greens::interval_weights(gamma.grid.spacing);
    InversionResult out;
    out.state.grid = gamma.grid;
    out.state.time = gamma.time;
    auto& m = out.state.m;
    m.assign(n, 0.0);
    for (std::size_t i = n - 1; i-- > 0;) {
        m[i] = w.decay * m[i + 1] - (w.near * g[i] + w.far * g[i + 1]);
    }
    const auto back = m_to_gamma(out.state);
    out.residual = numerics::max_abs_diff(back.gamma, g);
    return out;
}

GammaField m_to_gamma(const EulerianState& m) {
    GammaField out{m.grid, numerics::centered_derivative(m.m, m.grid.spacing), m.time};
    for (std::size_t i = 0; i < out.gamma.size(); ++i) out.gamma[i] -= m.m[i];
    return out;
}

double l2_norm(const UniformGrid& grid, const std::vector<double>& f) {
    std::vector<double> sq(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) sq[i] = f[i] * f[i];
    return std::sqrt(numerics::trapezoid(sq, grid.spacing));
}

double h1_norm(const EulerianState& s) {
    const auto mx = numerics::centered_derivative(s.m, s.grid.spacing);
    std::vector<double> sq(s.m.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = s.m[i] * s.m[i] + mx[i] * mx[i];
    return std::sqrt(numerics::trapezoid(sq, s.grid.spacing));
}

}  // namespace moch
