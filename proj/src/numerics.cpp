#include "moch/numerics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace moch::numerics {

std::vector<double> centered_derivative(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n, 0.0);
    if (n < 3) return d;
    const double inv2h = 0.5 / h;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) * inv2h;
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2h;
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2h;
    return d;
}

namespace {

// Derivative at `at` of the quadratic interpolating three samples.
double three_point(double x0, double x1, double x2, double f0, double f1, double f2, double at) {
    const double l0 = ((at - x1) + (at - x2)) / ((x0 - x1) * (x0 - x2));
    const double l1 = ((at - x0) + (at - x2)) / ((x1 - x0) * (x1 - x2));
    const double l2 = ((at - x0) + (at - x1)) / ((x2 - x0) * (x2 - x1));
    return l0 * f0 + l1 * f1 + l2 * f2;
}

}  // namespace

std::vector<double> derivative(std::span<const double> x, std::span<const double> f) {
    assert(x.size() == f.size());
    const std::size_t n = f.size();
    std::vector<double> d(n, 0.0);
    if (n < 3) return d;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d[i] = three_point(x[i - 1], x[i], x[i + 1], f[i - 1], f[i], f[i + 1], x[i]);
    }
    d[0] = three_point(x[0], x[1], x[2], f[0], f[1], f[2], x[0]);
    d[n - 1] = three_point(x[n - 3], x[n - 2], x[n - 1], f[n - 3], f[n - 2], f[n - 1], x[n - 1]);
    return d;
}

std::vector<double> cumulative_trapezoid(std::span<const double> x, std::span<const double> f) {
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = 1; i < f.size(); ++i) {
        out[i] = out[i - 1] + 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
    }
    return out;
}

std::vector<double> cumulative_trapezoid(std::span<const double> f, double h) {
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = 1; i < f.size(); ++i) out[i] = out[i - 1] + 0.5 * (f[i] + f[i - 1]) * h;
    return out;
}

double trapezoid(std::span<const double> f, double h) {
    if (f.size() < 2) return 0.0;
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
    return s * h;
}

double trapezoid(std::span<const double> x, std::span<const double> f) {
    double s = 0.0;
    for (std::size_t i = 1; i < f.size(); ++i) s += 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
    return s;
}

std::vector<double> trapezoid_weights(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double half = 0.5 * (x[i + 1] - x[i]);
        w[i] += half;
        w[i + 1] += half;
    }
    return w;
}

double interpolate(std::span<const double> x, std::span<const double> f, double at) {
    if (at <= x.front()) return f.front();
    if (at >= x.back()) return f.back();
    const auto it = std::upper_bound(x.begin(), x.end(), at);
    const auto j = static_cast<std::size_t>(it - x.begin()) - 1;
    const double width = x[j + 1] - x[j];
    if (width <= 0.0) return f[j];
    const double t = (at - x[j]) / width;
    return f[j] + t * (f[j + 1] - f[j]);
}

double interpolate_uniform(double origin, double h, std::span<const double> f, double at) {
    const double r = (at - origin) / h;
    if (r <= 0.0) return f.front();
    const auto last = static_cast<double>(f.size() - 1);
    if (r >= last) return f.back();
    auto j = static_cast<std::size_t>(r);
    if (j >= f.size() - 1) j = f.size() - 2;
    const double t = r - static_cast<double>(j);
    return f[j] + t * (f[j + 1] - f[j]);
}

double max_abs(std::span<const double> f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

bool all_finite(std::span<const double> f) {
    return std::all_of(f.begin(), f.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace moch::numerics
