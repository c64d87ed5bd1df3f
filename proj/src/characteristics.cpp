#include "moch/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "moch/closure.hpp"
#include "moch/errors.hpp"
#include "moch/numerics.hpp"

namespace moch {

namespace {

constexpr std::size_t kAtomKnots = 8;

// Linear interpolation of f over strictly increasing knots t.
double lerp_knots(const std::vector<double>& t, const std::vector<double>& f, double at) {
    if (at <= t.front()) return f.front();
    if (at >= t.back()) return f.back();
    const auto j = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), at) - t.begin()) - 1;
    const double w = (at - t[j]) / (t[j + 1] - t[j]);
    return f[j] + w * (f[j + 1] - f[j]);
}

// P3x contribution of an atom at a point x (zero at the atom itself).
double atom_odd(const Atom& a, double x) {
    const double d = x - a.location;
    const double k = 0.5 * a.mass * std::exp(-std::abs(d));
    return d > 0.0 ? -k : (d < 0.0 ? k : 0.0);
}

}  // namespace

Snapshot::Snapshot(const EulerianState& state, const EnergyMeasure& measure, double lambda, CoefficientSet set)
    : time_(state.time) {
    validate(state);
    measure.validate();
    const auto& g = state.grid;
    const auto& mg = measure.grid;
    if (g.count != mg.count || g.origin != mg.origin || g.spacing != mg.spacing) {
        throw InvalidInput("energy measure and state live on different grids");
    }
    const auto c = compute_fields(state, measure, lambda, set);
    const auto& d = measure.density;
    const double h = g.spacing;
    const std::size_t n = g.count;

    std::vector<double> source(n);
    for (std::size_t i = 0; i < n; ++i) {
        source[i] = c.ux[i] + 2.0 * c.E[i] + c.N[i] * (c.mx[i] * c.mx[i] - d[i]);
    }
    const auto mass_prefix = numerics::cumulative_trapezoid(d, h);
    const auto source_prefix = numerics::cumulative_trapezoid(source, h);

    auto atoms = measure.atoms;
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.location < b.location; });
    for (const auto& a : atoms) {
        if (a.location < g.front() || a.location > g.back()) throw InvalidInput("atom outside the grid");
    }

    // dN/dP3x: N is affine in P3x with a coefficient depending only on lambda
    closure::Potentials unit;
    unit.P3x = 1.0;
    const double k = closure::slope_coefficient(set, lambda, 0.0, unit) -
                     closure::slope_coefficient(set, lambda, 0.0, closure::Potentials{});

    const auto cell_of = [&](double x) {
        return static_cast<std::size_t>(
            std::clamp(std::floor((x - g.origin) / h), 0.0, static_cast<double>(n - 2)));
    };
    const auto partial = [&](const std::vector<double>& prefix, const std::vector<double>& f, double x) {
        const std::size_t j = cell_of(x);
        const double s = x - g.x(j);
        return prefix[j] + 0.5 * s * (f[j] + f[j] + (f[j + 1] - f[j]) * s / h);
    };
    const auto at = [&](const std::vector<double>& f, double x) {
        return numerics::interpolate_uniform(g.origin, h, f, x);
    };

    const auto push = [&](double beta, double x, double G, double m, double u, double F) {
        beta_.push_back(beta);
        x_.push_back(x);
        G_.push_back(G);
        m_.push_back(m);
        u_.push_back(u);
        F_.push_back(F);
    };

    double atom_mass = 0.0;
    double atom_G = 0.0;
    std::size_t next_atom = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double xj = g.x(j);
        bool atom_here = false;
        while (next_atom < atoms.size() && atoms[next_atom].location <= xj) {
            const Atom& a = atoms[next_atom];
            const double xa = a.location;
            // N at the atom with its own jump of P3x taken at the midpoint: the
            // grid values in the atom's cell carry the one-sided jumps of every
            // atom in that cell, which interpolation would smear
            const std::size_t cell = cell_of(xa);
            const double xl = g.x(cell);
            const double xr = g.x(cell + 1);
            const double w = (xa - xl) / h;
            double n_mid = at(c.N, xa);
            for (const auto& b : atoms) {
                if (b.location < xl || b.location > xr) continue;
                n_mid -= k * ((1.0 - w) * atom_odd(b, xl) + w * atom_odd(b, xr));
                if (&b != &a) n_mid += k * atom_odd(b, xa);
            }
            const double beta_lo = xa + partial(mass_prefix, d, xa) + atom_mass;
            const double G_lo = partial(source_prefix, source, xa) + atom_G;
            const double m = at(state.m, xa);
            const double u = at(c.u, xa);
            const double F = at(c.F, xa);
            for (std::size_t l = 0; l <= kAtomKnots; ++l) {
                const double q = a.mass * static_cast<double>(l) / static_cast<double>(kAtomKnots);
                const double swept = q * n_mid - k * (0.5 * q * q - 0.5 * q * a.mass);
                if (l == 0 && !beta_.empty() && beta_.back() >= beta_lo) continue;
                push(beta_lo + q, xa, G_lo - swept, m, u, F);
            }
            atom_mass += a.mass;
            atom_G -= a.mass * n_mid;
            atom_here = xa == xj;
            ++next_atom;
        }
        if (atom_here) continue;
        push(xj + mass_prefix[j] + atom_mass, xj, source_prefix[j] + atom_G, state.m[j], c.u[j], c.F[j]);
    }
}

Snapshot Snapshot::smooth(const EulerianState& state, double lambda, CoefficientSet set) {
    validate(state);
    EnergyMeasure measure;
    measure.grid = state.grid;
    const auto mx = numerics::centered_derivative(state.m, state.grid.spacing);
    measure.density.resize(mx.size());
    for (std::size_t i = 0; i < mx.size(); ++i) measure.density[i] = mx[i] * mx[i];
    return Snapshot(state, measure, lambda, set);
}

Snapshot Snapshot::from_lagrangian(const LagrangianState& state, CoefficientSet set) {
    validate(state);
    const auto c = compute_fields_lagrangian(state, set);
    Snapshot s;
    s.time_ = state.time;
    s.beta_ = state.beta;
    s.x_ = state.x;
    // rounding in the time stepper can leave a node a few ulps behind its
    // left neighbour on a plateau
    for (std::size_t i = 1; i < s.x_.size(); ++i) s.x_[i] = std::max(s.x_[i], s.x_[i - 1]);
    s.G_ = c.G;
    s.m_ = state.m;
    s.u_ = c.u;
    s.F_ = c.F;
    return s;
}

double Snapshot::along_beta(const std::vector<double>& f, double beta) const {
    const double slack = 1e-12 * std::max({1.0, std::abs(beta_.front()), std::abs(beta_.back())});
    if (!(beta >= beta_.front() - slack && beta <= beta_.back() + slack)) {
        throw DomainError("beta = " + std::to_string(beta) + " lies outside [" + std::to_string(beta_.front()) +
                          ", " + std::to_string(beta_.back()) + "]");
    }
    return lerp_knots(beta_, f, beta);
}

double Snapshot::beta_at(double x) const {
    if (!(x >= x_.front() && x <= x_.back())) {
        throw DomainError("x = " + std::to_string(x) + " lies outside [" + std::to_string(x_.front()) + ", " +
                          std::to_string(x_.back()) + "]");
    }
    const auto j = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
    if (x_[j] == x) return beta_[j];
    const double w = (x - x_[j]) / (x_[j + 1] - x_[j]);
    return beta_[j] + w * (beta_[j + 1] - beta_[j]);
}

double Snapshot::x_at(double beta) const { return along_beta(x_, beta); }
double Snapshot::G_at(double beta) const { return along_beta(G_, beta); }
double Snapshot::m_at(double beta) const { return along_beta(m_, beta); }
double Snapshot::u_at(double beta) const { return along_beta(u_, beta); }
double Snapshot::F_at(double beta) const { return along_beta(F_, beta); }

double Snapshot::G_lipschitz() const {
    double c = 0.0;
    for (std::size_t j = 0; j + 1 < beta_.size(); ++j) {
        c = std::max(c, std::abs(G_[j + 1] - G_[j]) / (beta_[j + 1] - beta_[j]));
    }
    return c;
}

double Snapshot::max_speed() const { return numerics::max_abs(u_); }

double Snapshot::source_mass() const {
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < x_.size(); ++j) {
        total += 0.5 * (x_[j + 1] - x_[j]) * (std::abs(F_[j]) + std::abs(F_[j + 1]));
    }
    return total;
}

double beta_coordinate(const Snapshot& snapshot, double x) { return snapshot.beta_at(x); }
double x_of_beta(const Snapshot& snapshot, double beta) { return snapshot.x_at(beta); }
double G_functional(const Snapshot& snapshot, double beta) { return snapshot.G_at(beta); }

std::vector<double> TracingData::times() const {
    std::vector<double> t;
    t.reserve(snapshots.size());
    for (const auto& s : snapshots) t.push_back(s.time());
    return t;
}

void TracingData::validate() const {
    if (snapshots.empty()) throw InvalidInput("no snapshots to trace through");
    if (snapshots.front().time() != 0.0) throw InvalidInput("tracing data must start at t = 0");
    if (snapshots.size() == 1) return;
    const double dt = snapshots[1].time() - snapshots[0].time();
    if (!(dt > 0.0)) throw InvalidInput("snapshot times must increase");
    for (std::size_t k = 1; k < snapshots.size(); ++k) {
        const double step = snapshots[k].time() - snapshots[k - 1].time();
        if (std::abs(step - dt) > 1e-9 * std::max(1.0, dt)) {
            throw InvalidInput("snapshot times must be uniformly spaced");
        }
    }
}

TracingData tracing_data(const EulerianTrajectory& trajectory) {
    TracingData data;
    data.snapshots.reserve(trajectory.states.size());
    for (const auto& s : trajectory.states) data.snapshots.push_back(Snapshot::smooth(s, trajectory.lambda, trajectory.set));
    return data;
}

TracingData tracing_data(const LagrangianTrajectory& trajectory) {
    TracingData data;
    data.snapshots.reserve(trajectory.states.size());
    for (const auto& s : trajectory.states) data.snapshots.push_back(Snapshot::from_lagrangian(s, trajectory.set));
    return data;
}

Bounds measure_bounds(const TracingData& data) {
    Bounds b;
    for (const auto& s : data.snapshots) {
        b.C_inf = std::max(b.C_inf, s.max_speed());
        b.C_S = std::max(b.C_S, s.source_mass());
        b.C_G = std::max(b.C_G, s.G_lipschitz());
    }
    return b;
}

namespace {

double weighted_sup(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& t,
                    double c) {
    double out = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) out = std::max(out, std::exp(-2.0 * c * t[n]) * std::abs(a[n] - b[n]));
    return out;
}

}  // namespace

Trace picard_trace(const TracingData& data, double y0, double horizon, const PicardOptions& options) {
    data.validate();
    const auto all_times = data.times();
    const double dt = all_times.size() > 1 ? all_times[1] - all_times[0] : 0.0;
    const double eps = 1e-9 * std::max(1.0, dt);
    if (!(horizon >= 0.0) || horizon > all_times.back() + eps) {
        throw InvalidInput("horizon " + std::to_string(horizon) + " is not covered by the stored trajectory");
    }
    std::size_t count = 0;
    while (count < all_times.size() && all_times[count] <= horizon + eps) ++count;

    Trace tr;
    tr.t.assign(all_times.begin(), all_times.begin() + static_cast<std::ptrdiff_t>(count));
    const double beta0 = data.snapshots.front().beta_at(y0);

    double c = 0.0;
    if (options.weight_constant) {
        c = *options.weight_constant;
    } else {
        for (std::size_t n = 0; n < count; ++n) c = std::max(c, data.snapshots[n].G_lipschitz());
    }
    tr.weight_constant = c;

    std::vector<double> current(count, beta0);
    if (options.initial_iterate) {
        if (options.initial_iterate->size() != count) {
            throw InvalidInput("initial iterate has " + std::to_string(options.initial_iterate->size()) +
                               " entries, the mesh has " + std::to_string(count));
        }
        current = *options.initial_iterate;
    }

    std::vector<double> next(count);
    std::vector<double> g(count);
    double previous_update = 0.0;
    bool converged = false;
    for (std::size_t k = 0; k < options.max_iterations; ++k) {
        for (std::size_t n = 0; n < count; ++n) g[n] = data.snapshots[n].G_at(current[n]);
        next[0] = beta0;
        for (std::size_t n = 1; n < count; ++n) next[n] = next[n - 1] + 0.5 * dt * (g[n - 1] + g[n]);
        const double update = weighted_sup(next, current, tr.t, c);
        tr.updates.push_back(update);
        if (k > 0 && previous_update > 0.0) tr.contraction_factors.push_back(update / previous_update);
        previous_update = update;
        current.swap(next);
        tr.iterations = k + 1;
        if (update < options.tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw ConvergenceFailure("Picard iteration did not converge in " + std::to_string(options.max_iterations) +
                                 " iterations (last update " + std::to_string(previous_update) + ")");
    }

    tr.beta = current;
    tr.x.resize(count);
    tr.m.resize(count);
    std::vector<double> u(count);
    for (std::size_t n = 0; n < count; ++n) {
        const auto& s = data.snapshots[n];
        tr.x[n] = s.x_at(tr.beta[n]);
        tr.m[n] = s.m_at(tr.beta[n]);
        u[n] = s.u_at(tr.beta[n]);
    }
    for (std::size_t n = 0; n + 1 < count; ++n) {
        const double speed = (tr.x[n + 1] - tr.x[n]) / dt;
        tr.velocity_residual = std::max(tr.velocity_residual, std::abs(speed - 0.5 * (u[n] + u[n + 1])));
    }
    return tr;
}

double characteristic_identity_residual(const TracingData& data, const Trace& trace) {
    const std::size_t count = trace.t.size();
    if (count == 0) return 0.0;
    if (count > data.snapshots.size() || trace.beta.size() != count || trace.m.size() != count) {
        throw InvalidInput("trace does not fit the tracing data");
    }
    std::vector<double> f(count);
    for (std::size_t n = 0; n < count; ++n) f[n] = data.snapshots[n].F_at(trace.beta[n]);
    double lo = 0.0;
    double hi = 0.0;
    double integral = 0.0;
    for (std::size_t n = 1; n < count; ++n) {
        integral += 0.5 * (trace.t[n] - trace.t[n - 1]) * (f[n - 1] + f[n]);
        const double r = trace.m[n] - trace.m[0] - integral;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return hi - lo;
}

}  // namespace moch
