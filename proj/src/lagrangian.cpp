#include "moch/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "moch/closure.hpp"
#include "moch/errors.hpp"
#include "moch/greens.hpp"
#include "moch/numerics.hpp"

namespace moch {

namespace {

constexpr double pi = std::numbers::pi;

double wrap_angle(double theta) {
    double r = std::remainder(theta, 2.0 * pi);
    if (r <= -pi) r += 2.0 * pi;
    return r;
}

}  // namespace

void validate(const LagrangianState& s) {
    const std::size_t n = s.labels.size();
    if (s.beta.size() != n || s.x.size() != n || s.m.size() != n || s.theta.size() != n) {
        throw InvalidInput("Lagrangian state arrays differ in length");
    }
    if (n < 3) throw InvalidInput("Lagrangian state needs at least 3 nodes");
    for (const auto* v : {&s.labels, &s.beta, &s.x, &s.m, &s.theta}) {
        if (!numerics::all_finite(*v)) throw InvalidInput("Lagrangian state contains non-finite values");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(s.beta[i] > s.beta[i - 1])) {
            throw InvalidInput("beta not strictly increasing at node " + std::to_string(i));
        }
    }
}

LagrangianState init_lagrangian(const EulerianState& m0, std::size_t node_count, double lambda, double jitter,
                                std::uint64_t seed) {
    validate(m0);
    if (node_count < 2) throw InvalidInput("node_count must be at least 2");
    if (lambda == 0.0) throw ParameterError("lambda must be nonzero");
    if (!(jitter >= 0.0 && jitter < 0.5)) throw InvalidInput("label jitter must lie in [0, 0.5)");

    const auto y = m0.grid.abscissae();
    const auto mx = numerics::centered_derivative(m0.m, m0.grid.spacing);
    std::vector<double> map(y.size());
    {
        std::vector<double> mx2(mx.size());
        for (std::size_t i = 0; i < mx.size(); ++i) mx2[i] = mx[i] * mx[i];
        const auto energy = numerics::cumulative_trapezoid(mx2, m0.grid.spacing);
        for (std::size_t i = 0; i < y.size(); ++i) map[i] = y[i] + energy[i];
    }

    LagrangianState s;
    s.time = m0.time;
    s.lambda = lambda;
    s.labels.resize(node_count);
    const double lo = map.front();
    const double hi = map.back();
    const double step = (hi - lo) / static_cast<double>(node_count - 1);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> shift(-jitter, jitter);
    for (std::size_t k = 0; k < node_count; ++k) {
        double label = lo + static_cast<double>(k) * step;
        if (jitter > 0.0 && k > 0 && k + 1 < node_count) label += shift(rng) * step;
        s.labels[k] = label;
    }
    s.labels.back() = hi;
    s.beta = s.labels;

    s.x.resize(node_count);
    s.m.resize(node_count);
    s.theta.resize(node_count);
    for (std::size_t k = 0; k < node_count; ++k) {
        const double xk = numerics::interpolate(map, y, s.labels[k]);
        s.x[k] = xk;
        s.m[k] = numerics::interpolate_uniform(m0.grid.origin, m0.grid.spacing, m0.m, xk);
        s.theta[k] = 2.0 * std::atan(numerics::interpolate_uniform(m0.grid.origin, m0.grid.spacing, mx, xk));
    }
    return s;
}

std::vector<double> cumulative_arc(const LagrangianState& state) {
    const std::size_t n = state.size();
    std::vector<double> s(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        const double c0 = 0.5 * (1.0 + std::cos(state.theta[i - 1]));
        const double c1 = 0.5 * (1.0 + std::cos(state.theta[i]));
        s[i] = s[i - 1] + 0.5 * (c0 + c1) * (state.beta[i] - state.beta[i - 1]);
    }
    return s;
}

LagrangianCoefficients compute_fields_lagrangian(const LagrangianState& state, CoefficientSet set) {
    const std::size_t n = state.size();
    const double lambda = state.lambda;
    if (lambda == 0.0) throw ParameterError("lambda must be nonzero");

    LagrangianCoefficients c;
    c.arclength = cumulative_arc(state);

    std::vector<double> cos2(n), sin2(n), sint(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ct = std::cos(state.theta[i]);
        cos2[i] = 0.5 * (1.0 + ct);
        sin2[i] = 0.5 * (1.0 - ct);
        sint[i] = std::sin(state.theta[i]);
    }

    // p * g with g dx = integrand dbeta; the arclength integrals carry no 1/2.
    std::vector<double> values(n);
    auto potential = [&](auto integrand, std::vector<double>& value, std::vector<double>& slope) {
        for (std::size_t i = 0; i < n; ++i) values[i] = integrand(i);
        auto k = greens::conv_kernel_arclength_linear(c.arclength, state.beta, values);
        value = std::move(k.even_part);
        slope = std::move(k.odd_part);
        for (std::size_t i = 0; i < n; ++i) {
            value[i] *= 0.5;
            slope[i] *= 0.5;
        }
    };
    const auto& m = state.m;
    potential([&](std::size_t i) { return m[i] * cos2[i]; }, c.P1, c.P1x);
    potential([&](std::size_t i) { return m[i] * m[i] * cos2[i]; }, c.P2, c.P2x);
    potential([&](std::size_t i) { return sin2[i]; }, c.P3, c.P3x);

    c.u.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        closure::Potentials p;
        p.P1 = c.P1[i];
        p.P1x = c.P1x[i];
        p.P2 = c.P2[i];
        p.P2x = c.P2x[i];
        p.P3 = c.P3[i];
        c.u[i] = closure::velocity(set, lambda, m[i], p);
    }
    // H dx = (u m_x - u m) dx = (u/2) sin(theta) dbeta - u m cos^2(theta/2) dbeta
    potential([&](std::size_t i) { return 0.5 * c.u[i] * sint[i] - m[i] * c.u[i] * cos2[i]; }, c.P4, c.P4x);
    potential([&](std::size_t i) { return c.P3[i] * cos2[i]; }, c.P5, c.P5x);

    c.F.resize(n);
    c.N.resize(n);
    c.P.resize(n);
    std::vector<double> energy_flux(n);
    for (std::size_t i = 0; i < n; ++i) {
        const closure::Potentials p{c.P1[i],  c.P2[i],  c.P3[i],  c.P4[i],  c.P5[i],
                                    c.P1x[i], c.P2x[i], c.P3x[i], c.P4x[i], c.P5x[i]};
        c.F[i] = closure::source(set, lambda, m[i], c.u[i], p);
        c.N[i] = closure::slope_coefficient(set, lambda, m[i], p);
        c.P[i] = closure::forcing(lambda, m[i], c.u[i], c.F[i], c.N[i]);
        // 2 E x_beta with E = P m_x - N m_x^2 / 2
        energy_flux[i] = c.P[i] * sint[i] - c.N[i] * sin2[i];
    }
    const auto source = numerics::cumulative_trapezoid(state.beta, energy_flux);
    c.G.resize(n);
    for (std::size_t i = 0; i < n; ++i) c.G[i] = c.u[i] + source[i];
    return c;
}

LagrangianRates rhs_lagrangian(const LagrangianState& state, const LagrangianCoefficients& c) {
    const std::size_t n = state.size();
    LagrangianRates r;
    r.beta = c.G;
    r.x = c.u;
    r.m = c.F;
    r.theta.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double th = state.theta[i];
        const double ct = std::cos(th);
        r.theta[i] = (1.0 + ct) * c.P[i] - c.N[i] * std::sin(th) - 0.5 * (1.0 - ct);
    }
    return r;
}

namespace {

LagrangianState advance(const LagrangianState& s, double a, const LagrangianRates& k) {
    LagrangianState out = s;
    for (std::size_t i = 0; i < s.size(); ++i) {
        out.beta[i] += a * k.beta[i];
        out.x[i] += a * k.x[i];
        out.m[i] += a * k.m[i];
        out.theta[i] += a * k.theta[i];
    }
    return out;
}

bool beta_increasing(const std::vector<double>& beta) {
    for (std::size_t i = 1; i < beta.size(); ++i) {
        if (!(beta[i] > beta[i - 1])) return false;
    }
    return true;
}

// One RK4 step without monotonicity handling. theta is left unwrapped.
LagrangianState rk4(const LagrangianState& s, double dt, CoefficientSet set) {
    auto rates = [&](const LagrangianState& st) { return rhs_lagrangian(st, compute_fields_lagrangian(st, set)); };
    const auto k1 = rates(s);
    const auto k2 = rates(advance(s, 0.5 * dt, k1));
    const auto k3 = rates(advance(s, 0.5 * dt, k2));
    const auto k4 = rates(advance(s, dt, k3));
    LagrangianState out = s;
    for (std::size_t i = 0; i < s.size(); ++i) {
        out.beta[i] += dt / 6.0 * (k1.beta[i] + 2.0 * k2.beta[i] + 2.0 * k3.beta[i] + k4.beta[i]);
        out.x[i] += dt / 6.0 * (k1.x[i] + 2.0 * k2.x[i] + 2.0 * k3.x[i] + k4.x[i]);
        out.m[i] += dt / 6.0 * (k1.m[i] + 2.0 * k2.m[i] + 2.0 * k3.m[i] + k4.m[i]);
        out.theta[i] += dt / 6.0 * (k1.theta[i] + 2.0 * k2.theta[i] + 2.0 * k3.theta[i] + k4.theta[i]);
    }
    out.time = s.time + dt;
    return out;
}

// Wraps theta back into (-pi, pi] and reports nodes that crossed pi.
std::vector<BreakingEvent> wrap_and_detect(const LagrangianState& before, LagrangianState& after, double dt) {
    std::vector<BreakingEvent> events;
    const std::size_t n = after.size();
    std::size_t i = 0;
    while (i < n) {
        const double old_t = before.theta[i];
        const double new_t = after.theta[i];
        const bool crossed = new_t <= -pi || new_t > pi;
        if (!crossed) {
            ++i;
            continue;
        }
        BreakingEvent e;
        e.node_lo = i;
        const double boundary = new_t <= -pi ? -pi : pi;
        const double frac = std::clamp((old_t - boundary) / (old_t - new_t), 0.0, 1.0);
        e.time = before.time + frac * dt;
        e.x_location = before.x[i] + frac * (after.x[i] - before.x[i]);
        e.theta_rate = (new_t - old_t) / dt;
        std::size_t j = i;
        while (j + 1 < n && (after.theta[j + 1] <= -pi || after.theta[j + 1] > pi)) ++j;
        e.node_hi = j;
        e.label_lo = after.labels[i];
        e.label_hi = after.labels[j];
        events.push_back(e);
        i = j + 1;
    }
    for (auto& th : after.theta) th = wrap_angle(th);
    return events;
}

void step_recursive(const LagrangianState& s, double dt, const LagrangianSettings& settings, int depth,
                    LagrangianStepResult& out) {
    std::optional<LagrangianState> next;
    try {
        next = rk4(s, dt, settings.set);
    } catch (const InvalidInput&) {
        // an intermediate stage lost the ordering of beta
    }
    if (!next || !beta_increasing(next->beta) || !numerics::all_finite(next->theta) ||
        !numerics::all_finite(next->m)) {
        if (depth >= settings.max_halvings) {
            throw SolverFailure("beta lost monotonicity at t = " + std::to_string(s.time) + " after " +
                                std::to_string(depth) + " halvings");
        }
        LagrangianStepResult first;
        first.smallest_dt = dt;
        step_recursive(s, 0.5 * dt, settings, depth + 1, first);
        LagrangianStepResult second;
        second.smallest_dt = dt;
        step_recursive(first.state, 0.5 * dt, settings, depth + 1, second);
        out.state = std::move(second.state);
        out.events.insert(out.events.end(), first.events.begin(), first.events.end());
        out.events.insert(out.events.end(), second.events.begin(), second.events.end());
        out.smallest_dt = std::min({out.smallest_dt, first.smallest_dt, second.smallest_dt});
        return;
    }
    auto events = wrap_and_detect(s, *next, dt);
    out.events.insert(out.events.end(), events.begin(), events.end());
    out.state = std::move(*next);
    out.smallest_dt = std::min(out.smallest_dt, dt);
}

}  // namespace

LagrangianStepResult step_lagrangian(const LagrangianState& state, double dt, const LagrangianSettings& settings) {
    if (!(dt > 0.0)) throw ConfigurationError("time step must be positive");
    validate(state);
    LagrangianStepResult out;
    out.smallest_dt = dt;
    step_recursive(state, dt, settings, 0, out);
    return out;
}

LagrangianTrajectory simulate_lagrangian(const LagrangianState& initial, double dt, double t_final,
                                         std::size_t output_every, const LagrangianSettings& settings) {
    validate(initial);
    if (!(dt > 0.0)) throw ConfigurationError("time step must be positive");
    if (output_every == 0) output_every = 1;
    LagrangianTrajectory traj;
    traj.lambda = initial.lambda;
    traj.set = settings.set;
    traj.dt = dt;
    traj.states.push_back(initial);
    const auto steps = static_cast<std::size_t>(std::ceil((t_final - initial.time) / dt - 1e-9));
    LagrangianState current = initial;
    for (std::size_t k = 1; k <= steps; ++k) {
        const double target = k == steps ? t_final : initial.time + static_cast<double>(k) * dt;
        auto result = step_lagrangian(current, target - current.time, settings);
        result.state.time = target;
        traj.events.insert(traj.events.end(), result.events.begin(), result.events.end());
        current = std::move(result.state);
        if (k % output_every == 0 || k == steps) traj.states.push_back(current);
    }
    return traj;
}

Pullback to_eulerian(const LagrangianState& state, const UniformGrid& grid, double plateau_tolerance) {
    grid.validate();
    const std::size_t n = state.size();
    Pullback out;
    out.state.grid = grid;
    out.state.time = state.time;
    out.state.m.resize(grid.count);
    for (std::size_t j = 0; j < grid.count; ++j) out.state.m[j] = numerics::interpolate(state.x, state.m, grid.x(j));

    out.measure.grid = grid;
    std::vector<double> cell_mass(grid.count, 0.0);
    const double h = grid.spacing;
    // cell j covers [x_j - h/2, x_j + h/2]; mass beyond the end cells is clamped into them
    auto deposit = [&](double a, double b, double mass) {
        if (mass == 0.0) return;
        const double len = b - a;
        const double first = (a - grid.origin) / h + 0.5;
        const double last = (b - grid.origin) / h + 0.5;
        const auto clampi = [&](double r) {
            return static_cast<std::size_t>(std::clamp(std::floor(r), 0.0, static_cast<double>(grid.count - 1)));
        };
        const std::size_t ja = clampi(first);
        const std::size_t jb = clampi(last);
        if (ja == jb || len <= 0.0) {
            cell_mass[ja] += mass;
            return;
        }
        for (std::size_t j = ja; j <= jb; ++j) {
            const double lo = j == ja ? a : grid.x(j) - 0.5 * h;
            const double hi = j == jb ? b : grid.x(j) + 0.5 * h;
            cell_mass[j] += mass * std::max(0.0, hi - lo) / len;
        }
    };

    double atom_mass = 0.0;
    double atom_moment = 0.0;
    auto flush_atom = [&]() {
        if (atom_mass > 0.0) out.measure.atoms.push_back({atom_moment / atom_mass, atom_mass});
        atom_mass = 0.0;
        atom_moment = 0.0;
    };
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double db = state.beta[i + 1] - state.beta[i];
        const double dx = state.x[i + 1] - state.x[i];
        const double s0 = 0.5 * (1.0 - std::cos(state.theta[i]));
        const double s1 = 0.5 * (1.0 - std::cos(state.theta[i + 1]));
        const double mass = 0.5 * (s0 + s1) * db;
        if (dx <= plateau_tolerance * db) {
            atom_mass += mass;
            atom_moment += mass * 0.5 * (state.x[i] + state.x[i + 1]);
            continue;
        }
        flush_atom();
        deposit(state.x[i], state.x[i + 1], mass);
    }
    flush_atom();

    out.measure.density.resize(grid.count);
    for (std::size_t j = 0; j < grid.count; ++j) {
        // end cells are half cells under the trapezoid rule
        const double width = (j == 0 || j + 1 == grid.count) ? 0.5 * h : h;
        out.measure.density[j] = cell_mass[j] / width;
    }
    return out;
}

}  // namespace moch
