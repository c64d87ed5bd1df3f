#include "moch/eulerian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "moch/closure.hpp"
#include "moch/errors.hpp"
#include "moch/greens.hpp"
#include "moch/numerics.hpp"

namespace moch {

std::string_view to_string(CoefficientSet set) {
    return set == CoefficientSet::as_printed ? "as_printed" : "rederived";
}

CoefficientSet parse_coefficient_set(std::string_view name) {
    if (name == "rederived") return CoefficientSet::rederived;
    if (name == "as_printed" || name == "as-printed") return CoefficientSet::as_printed;
    throw ConfigurationError("unknown coefficient set '" + std::string(name) + "'");
}

namespace {

greens::KernelResult convolve(const std::vector<double>& x, const std::vector<double>& f) {
    return greens::conv_kernel(greens::SampledFunction(x, f));
}

closure::Potentials potentials_at(const Coefficients& c, std::size_t i) {
    return {c.P1[i], c.P2[i], c.P3[i], c.P4[i], c.P5[i], c.P1x[i], c.P2x[i], c.P3x[i], c.P4x[i], c.P5x[i]};
}

}  // namespace

namespace {

// Shared body of both compute_fields overloads. The energy enters P3 through
// `density` (m_x^2 for a smooth state) and the optional atoms.
Coefficients fields_with_energy(const EulerianState& state, const std::vector<double>* density,
                                const std::vector<Atom>& atoms, double lambda, CoefficientSet set) {
    if (lambda == 0.0 || !std::isfinite(lambda)) {
        throw ParameterError("lambda must be finite and nonzero");
    }
    validate(state);
    const std::size_t n = state.grid.count;
    const double h = state.grid.spacing;
    const auto x = state.grid.abscissae();
    const auto& m = state.m;

    Coefficients c;
    c.lambda = lambda;
    c.set = set;
    c.mx = numerics::centered_derivative(m, h);

    std::vector<double> m2(n), mx2(n);
    for (std::size_t i = 0; i < n; ++i) {
        m2[i] = m[i] * m[i];
        mx2[i] = c.mx[i] * c.mx[i];
    }
    auto k1 = convolve(x, m);
    auto k2 = convolve(x, m2);
    auto k3 = convolve(x, density ? *density : mx2);
    c.P1 = std::move(k1.even_part);
    c.P1x = std::move(k1.odd_part);
    c.P2 = std::move(k2.even_part);
    c.P2x = std::move(k2.odd_part);
    c.P3 = std::move(k3.even_part);
    c.P3x = std::move(k3.odd_part);
    for (const auto& a : atoms) {
        for (std::size_t i = 0; i < n; ++i) {
            const double d = x[i] - a.location;
            const double k = 0.5 * a.mass * std::exp(-std::abs(d));
            c.P3[i] += k;
            c.P3x[i] += d > 0.0 ? -k : (d < 0.0 ? k : 0.0);
        }
    }

    c.u.resize(n);
    c.H.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        closure::Potentials p;
        p.P1 = c.P1[i];
        p.P1x = c.P1x[i];
        p.P2 = c.P2[i];
        p.P2x = c.P2x[i];
        p.P3 = c.P3[i];
        c.u[i] = closure::velocity(set, lambda, m[i], p);
        c.H[i] = c.u[i] * c.mx[i] - c.u[i] * m[i];
    }
    c.ux = numerics::centered_derivative(c.u, h);

    auto k4 = convolve(x, c.H);
    auto k5 = convolve(x, c.P3);
    c.P4 = std::move(k4.even_part);
    c.P4x = std::move(k4.odd_part);
    c.P5 = std::move(k5.even_part);
    c.P5x = std::move(k5.odd_part);

    c.F.resize(n);
    c.N.resize(n);
    c.P.resize(n);
    c.E.resize(n);
    std::vector<double> mu;
    if (set == CoefficientSet::as_printed) {
        mu.resize(n);
        for (std::size_t i = 0; i < n; ++i) mu[i] = m[i] * c.u[i];
        mu = numerics::centered_derivative(mu, h);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto p = potentials_at(c, i);
        const double mi = m[i];
        const double mxi = c.mx[i];
        c.F[i] = closure::source(set, lambda, mi, c.u[i], p);
        c.N[i] = closure::slope_coefficient(set, lambda, mi, p);
        c.P[i] = closure::forcing(lambda, mi, c.u[i], c.F[i], c.N[i]);
        if (set == CoefficientSet::rederived) {
            c.E[i] = c.P[i] * mxi - 0.5 * c.N[i] * mxi * mxi;
        } else {
            c.E[i] = mu[i] * mxi - p.P4x * mxi - c.H[i] * mxi - p.P4 * mxi +
                     0.5 * (-2.0 * mi * mxi * mxi + p.P3x * mxi + mxi * mxi * mxi + p.P3 * mxi) +
                     lambda * (mi + p.P1) * mxi +
                     (p.P5x + p.P5 + p.P3 - p.P2 + mi * mi) * mxi / (2.0 * lambda) -
                     0.5 * c.ux[i] * mxi * mxi;
        }
    }
    return c;
}

}  // namespace

Coefficients compute_fields(const EulerianState& state, double lambda, CoefficientSet set) {
    return fields_with_energy(state, nullptr, {}, lambda, set);
}

Coefficients compute_fields(const EulerianState& state, const EnergyMeasure& energy, double lambda,
                            CoefficientSet set) {
    energy.validate();
    const auto& g = energy.grid;
    if (g.count != state.grid.count || g.origin != state.grid.origin || g.spacing != state.grid.spacing) {
        throw InvalidInput("energy measure and state live on different grids");
    }
    return fields_with_energy(state, &energy.density, energy.atoms, lambda, set);
}

std::vector<double> rhs_eulerian(const EulerianState& m, double lambda, CoefficientSet set) {
    const auto c = compute_fields(m, lambda, set);
    std::vector<double> out(c.F.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c.F[i] - c.u[i] * c.mx[i];
    return out;
}

namespace {

BlowupReport inspect(const EulerianState& s, double threshold) {
    BlowupReport r;
    r.time = s.time;
    if (!numerics::all_finite(s.m)) {
        r.detected = true;
        r.max_slope = std::numeric_limits<double>::infinity();
        return r;
    }
    const auto mx = numerics::centered_derivative(s.m, s.grid.spacing);
    std::size_t worst = 0;
    for (std::size_t i = 0; i < mx.size(); ++i) {
        if (std::abs(mx[i]) > std::abs(mx[worst])) worst = i;
    }
    r.max_slope = std::abs(mx[worst]);
    r.location = s.grid.x(worst);
    r.detected = !(r.max_slope <= threshold);
    return r;
}

EulerianState axpy(const EulerianState& s, double a, const std::vector<double>& k) {
    EulerianState out = s;
    for (std::size_t i = 0; i < out.m.size(); ++i) out.m[i] += a * k[i];
    return out;
}

}  // namespace

StepResult step_eulerian(const EulerianState& state, double dt, const EulerianSettings& settings) {
    if (!(dt > 0.0)) throw ConfigurationError("time step must be positive");
    const auto c1 = compute_fields(state, settings.lambda, settings.set);
    const double umax = numerics::max_abs(c1.u);
    if (umax > 0.0 && dt > settings.stability_factor * state.grid.spacing / umax) {
        std::ostringstream msg;
        msg << "dt = " << dt << " violates the advective bound " << settings.stability_factor
            << " * dx / max|u| = " << settings.stability_factor * state.grid.spacing / umax;
        throw ConfigurationError(msg.str());
    }
    std::vector<double> k1(c1.F.size());
    for (std::size_t i = 0; i < k1.size(); ++i) k1[i] = c1.F[i] - c1.u[i] * c1.mx[i];

    StepResult out;
    try {
        const auto k2 = rhs_eulerian(axpy(state, 0.5 * dt, k1), settings.lambda, settings.set);
        const auto k3 = rhs_eulerian(axpy(state, 0.5 * dt, k2), settings.lambda, settings.set);
        const auto k4 = rhs_eulerian(axpy(state, dt, k3), settings.lambda, settings.set);
        out.state = state;
        for (std::size_t i = 0; i < k1.size(); ++i) {
            out.state.m[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    } catch (const InvalidInput&) {
        // a stage went non-finite
        out.state = state;
        out.state.m.assign(state.m.size(), std::numeric_limits<double>::quiet_NaN());
    }
    out.state.time = state.time + dt;
    out.blowup = inspect(out.state, settings.blowup_threshold);
    return out;
}

EulerianTrajectory simulate_eulerian(const EulerianState& m0, double dt, double t_final,
                                     std::size_t output_every, const EulerianSettings& settings) {
    validate(m0);
    if (!(dt > 0.0)) throw ConfigurationError("time step must be positive");
    if (output_every == 0) output_every = 1;
    EulerianTrajectory traj;
    traj.lambda = settings.lambda;
    traj.set = settings.set;
    traj.dt = dt;
    traj.states.push_back(m0);

    const auto steps = static_cast<std::size_t>(std::ceil((t_final - m0.time) / dt - 1e-9));
    EulerianState current = m0;
    for (std::size_t k = 1; k <= steps; ++k) {
        const double target = k == steps ? t_final : m0.time + static_cast<double>(k) * dt;
        auto result = step_eulerian(current, target - current.time, settings);
        result.state.time = target;
        if (result.blowup.detected) {
            traj.blowup = result.blowup;
            traj.blowup.time = target;
            break;
        }
        current = std::move(result.state);
        if (k % output_every == 0 || k == steps) traj.states.push_back(current);
    }
    return traj;
}

namespace {

// First derivative of uniformly spaced samples, fourth order where five
// samples are available.
std::vector<double> time_derivative(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    if (n < 5) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t a = i == 0 ? 0 : i - 1;
            const std::size_t b = i + 1 == n ? i : i + 1;
            d[i] = (f[b] - f[a]) / (static_cast<double>(b - a) * h);
        }
        return d;
    }
    const double inv = 1.0 / (12.0 * h);
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) * inv;
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) * inv;
    for (std::size_t i = 2; i + 2 < n; ++i) d[i] = (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) * inv;
    d[n - 2] = (3 * f[n - 1] + 10 * f[n - 2] - 18 * f[n - 3] + 6 * f[n - 4] - f[n - 5]) * inv;
    d[n - 1] = (25 * f[n - 1] - 48 * f[n - 2] + 36 * f[n - 3] - 16 * f[n - 4] + 3 * f[n - 5]) * inv;
    return d;
}

}  // namespace

std::vector<double> energy_balance_residual(const EulerianTrajectory& trajectory) {
    const auto& states = trajectory.states;
    const std::size_t k = states.size();
    std::vector<double> energy(k), source(k);
    for (std::size_t j = 0; j < k; ++j) {
        const auto c = compute_fields(states[j], trajectory.lambda, trajectory.set);
        std::vector<double> w(c.mx.size()), e2(c.E.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
            w[i] = c.mx[i] * c.mx[i];
            e2[i] = 2.0 * c.E[i];
        }
        energy[j] = numerics::trapezoid(w, states[j].grid.spacing);
        source[j] = numerics::trapezoid(e2, states[j].grid.spacing);
    }
    if (k < 2) return std::vector<double>(k, 0.0);
    const double h = states[1].time - states[0].time;
    const auto rate = time_derivative(energy, h);
    std::vector<double> out(k);
    for (std::size_t j = 0; j < k; ++j) out[j] = std::abs(rate[j] - source[j]);
    return out;
}

double integrated_energy_residual(const EulerianTrajectory& trajectory) {
    const auto r = energy_balance_residual(trajectory);
    std::vector<double> t(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) t[j] = trajectory.states[j].time;
    return numerics::trapezoid(t, r);
}

}  // namespace moch
