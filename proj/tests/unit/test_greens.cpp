#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "moch/errors.hpp"
#include "moch/greens.hpp"
#include "moch/grid.hpp"
#include "support/oracles.hpp"

using namespace moch;
using greens::SampledFunction;

namespace {

SampledFunction sample(const UniformGrid& g, double (*f)(double)) {
    auto x = g.abscissae();
    std::vector<double> v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) v[i] = f(x[i]);
    return {x, v};
}

double gaussian(double x) { return std::exp(-x * x); }
double tent(double x) { return std::exp(-std::abs(x)); }

}  // namespace

TEST_CASE("zero input gives zero potentials") {
    const auto g = UniformGrid::symmetric(10.0, 101);
    const auto r = greens::conv_kernel(SampledFunction(g.abscissae(), std::vector<double>(101, 0.0)));
    for (std::size_t i = 0; i < 101; ++i) {
        CHECK(r.even_part[i] == 0.0);
        CHECK(r.odd_part[i] == 0.0);
    }
}

TEST_CASE("kernel applied to exp(-|x|) at the origin") {
    // closed form 1/2 (1 + |x|) exp(-|x|)
    const auto g = UniformGrid::symmetric(20.0, 4001);
    const auto f = sample(g, tent);
    const auto r = greens::conv_kernel(f);
    const std::size_t mid = 2000;
    CHECK(r.even_part[mid] == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(std::abs(r.odd_part[mid]) < 1e-12);
    const auto ref = oracle::conv(std::vector<double>(f.abscissae().begin(), f.abscissae().end()),
                                  std::vector<double>(f.values().begin(), f.values().end()));
    CHECK(std::abs(r.even_part[mid] - ref.even[mid]) < 1e-12);
}

TEST_CASE("kernel has unit mass") {
    const auto g = UniformGrid::symmetric(30.0, 3001);
    const auto r = greens::conv_kernel(SampledFunction(g.abscissae(), std::vector<double>(3001, 1.0)));
    CHECK(r.even_part[1500] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r.odd_part[1500]) < 1e-12);
}

TEST_CASE("linear-time convolution matches the quadratic oracle") {
    std::mt19937_64 rng(7);
    for (std::size_t n : {64u, 257u, 1024u}) {
        const auto g = UniformGrid::symmetric(12.0, n);
        const auto x = g.abscissae();
        const auto f = oracle::random_smooth(x, rng);
        const auto r = greens::conv_kernel(SampledFunction(x, f));
        const auto ref = oracle::conv(x, f);
        CHECK(oracle::rel_error(r.even_part, ref.even) < 1e-10);
        CHECK(oracle::rel_error(r.odd_part, ref.odd) < 1e-10);
    }
}

TEST_CASE("nonuniform abscissae and very short intervals") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> step(1e-7, 0.2);
    std::vector<double> x{-8.0};
    while (x.back() < 8.0) x.push_back(x.back() + step(rng));
    const auto f = oracle::random_smooth(x, rng);
    const auto r = greens::conv_kernel(SampledFunction(x, f));
    const auto ref = oracle::conv(x, f);
    CHECK(oracle::rel_error(r.even_part, ref.even) < 1e-10);
    CHECK(oracle::rel_error(r.odd_part, ref.odd) < 1e-10);
}

TEST_CASE("linear, positive, bounded") {
    std::mt19937_64 rng(3);
    const auto g = UniformGrid::symmetric(10.0, 401);
    const auto x = g.abscissae();
    const auto f1 = oracle::random_smooth(x, rng);
    const auto f2 = oracle::random_smooth(x, rng);
    std::vector<double> combo(x.size()), pos(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        combo[i] = 2.5 * f1[i] - 0.75 * f2[i];
        pos[i] = std::abs(f1[i]);
    }
    const auto r1 = greens::conv_kernel(SampledFunction(x, f1));
    const auto r2 = greens::conv_kernel(SampledFunction(x, f2));
    const auto rc = greens::conv_kernel(SampledFunction(x, combo));
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(rc.even_part[i] == doctest::Approx(2.5 * r1.even_part[i] - 0.75 * r2.even_part[i]).epsilon(1e-12));
    }
    // ||p * f||_inf <= ||p||_1 ||f||_inf = ||f||_inf, and p * f >= 0 for f >= 0
    const auto rp = greens::conv_kernel(SampledFunction(x, pos));
    double fmax = 0.0;
    for (double v : pos) fmax = std::max(fmax, v);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(rp.even_part[i] >= 0.0);
        CHECK(rp.even_part[i] <= fmax * (1.0 + 1e-12));
        CHECK(std::abs(rp.odd_part[i]) <= fmax * (1.0 + 1e-12));
    }
}

TEST_CASE("translation equivariance") {
    const auto g = UniformGrid::symmetric(15.0, 601);
    const double h = g.spacing;
    auto x = g.abscissae();
    std::vector<double> f(x.size()), shifted(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        f[i] = gaussian(x[i] - 1.0);
        shifted[i] = gaussian(x[i] - 1.0 - 20.0 * h);
    }
    const auto r = greens::conv_kernel(SampledFunction(x, f));
    const auto rs = greens::conv_kernel(SampledFunction(x, shifted));
    for (std::size_t i = 100; i + 100 < x.size(); ++i) {
        CHECK(std::abs(rs.even_part[i + 20] - r.even_part[i]) < 1e-10);
        CHECK(std::abs(rs.odd_part[i + 20] - r.odd_part[i]) < 1e-10);
    }
}

TEST_CASE("Helmholtz residual is second order for a Gaussian") {
    double previous = 0.0;
    for (std::size_t n : {1024u, 2048u, 4096u}) {
        const auto g = UniformGrid::symmetric(20.0, n + 1);
        const auto f = sample(g, gaussian);
        const double res = greens::helmholtz_residual(f, greens::conv_kernel(f));
        if (previous > 0.0) CHECK(previous / res == doctest::Approx(4.0).epsilon(0.1));
        previous = res;
    }
    CHECK(previous < 1e-4);
}

TEST_CASE("Helmholtz residual for exp(-|x|) concentrates at the kink") {
    const auto g = UniformGrid::symmetric(20.0, 2001);
    const auto f = sample(g, tent);
    const auto r = greens::conv_kernel(f);
    // exclude the kink and its neighbours
    const auto x = g.abscissae();
    const double h = g.spacing;
    double away = 0.0;
    double near = 0.0;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const double d2 = (r.even_part[i + 1] - 2.0 * r.even_part[i] + r.even_part[i - 1]) / (h * h);
        const double res = std::abs(r.even_part[i] - d2 - f.values()[i]);
        if (std::abs(x[i]) < 1.5 * h) {
            near = std::max(near, res);
        } else {
            away = std::max(away, res);
        }
    }
    CHECK(near > 10.0 * away);
    CHECK(away < h * h);
    CHECK(greens::helmholtz_residual(f, r) == doctest::Approx(near));
}

TEST_CASE("Helmholtz residual of zero") {
    const auto g = UniformGrid::symmetric(5.0, 51);
    const SampledFunction f(g.abscissae(), std::vector<double>(51, 0.0));
    CHECK(greens::helmholtz_residual(f, greens::conv_kernel(f)) == 0.0);
}

TEST_CASE("sampled function validation") {
    CHECK_THROWS_AS(SampledFunction({0.0, 1.0}, {1.0}), InvalidInput);
    CHECK_THROWS_AS(SampledFunction({0.0, 0.0, 1.0}, {1.0, 1.0, 1.0}), InvalidInput);
    CHECK_THROWS_AS(SampledFunction({0.0, 1.0}, {1.0, NAN}), InvalidInput);
}

TEST_CASE("arclength sums: zero weights and a total plateau") {
    const std::vector<double> s(9, 3.0);
    const auto zero = greens::conv_kernel_arclength(s, std::vector<double>(9, 0.0));
    for (double v : zero.even_part) CHECK(v == 0.0);
    const std::vector<double> w{0.5, -1.0, 2.0, 0.25, 1.0, 0.0, 3.0, -0.5, 1.5};
    const auto r = greens::conv_kernel_arclength(s, w);
    double total = 0.0;
    for (double v : w) total += v;
    for (double v : r.even_part) CHECK(v == doctest::Approx(total).epsilon(1e-14));
}

TEST_CASE("arclength sums match the double loop") {
    std::vector<double> s;
    std::vector<double> w;
    for (int i = 0; i <= 2000; ++i) {
        const double x = -10.0 + 0.01 * i;
        s.push_back(x);
        w.push_back(0.01 * std::exp(-x * x));
    }
    const auto r = greens::conv_kernel_arclength(s, w);
    const auto ref = oracle::arclength_sums(s, w);
    CHECK(oracle::rel_error(r.even_part, ref.even) < 1e-10);
    CHECK(oracle::rel_error(r.odd_part, ref.odd) < 1e-10);
}

TEST_CASE("arclength sums with plateaus") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> s{0.0};
    std::vector<double> w{1.0};
    for (int i = 1; i < 500; ++i) {
        s.push_back(s.back() + (u(rng) < 0.3 ? 0.0 : 0.05 * u(rng)));
        w.push_back(std::sin(0.1 * i) * 0.02);
    }
    const auto r = greens::conv_kernel_arclength(s, w);
    const auto ref = oracle::arclength_sums(s, w);
    CHECK(oracle::rel_error(r.even_part, ref.even) < 1e-10);
    CHECK(oracle::rel_error(r.odd_part, ref.odd) < 1e-10);
}

TEST_CASE("arclength sums reject a decreasing arclength") {
    CHECK_THROWS_AS(greens::conv_kernel_arclength(std::vector<double>{0.0, 1.0, 0.5}, std::vector<double>{1, 1, 1}),
                    InvalidInput);
    CHECK_THROWS_AS(greens::conv_kernel_arclength(std::vector<double>{0.0, 1.0}, std::vector<double>{1}),
                    InvalidInput);
}

TEST_CASE("piecewise-linear arclength integrals match Gauss-Legendre quadrature") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> beta{-4.0};
    std::vector<double> s{0.0};
    std::vector<double> g{0.0};
    for (int i = 1; i < 800; ++i) {
        beta.push_back(beta.back() + 0.005 + 0.02 * u(rng));
        // stretches of zero slope (plateaus) and of tiny slope
        const double slope = u(rng) < 0.2 ? 0.0 : (u(rng) < 0.2 ? 1e-6 : u(rng));
        s.push_back(s.back() + slope * (beta[i] - beta[i - 1]));
        g.push_back(std::cos(beta[i]) * std::exp(-0.1 * beta[i] * beta[i]));
    }
    const auto r = greens::conv_kernel_arclength_linear(s, beta, g);
    const auto ref = oracle::arclength_linear(s, beta, g);
    CHECK(oracle::rel_error(r.even_part, ref.even) < 1e-10);
    CHECK(oracle::rel_error(r.odd_part, ref.odd) < 1e-10);
}

TEST_CASE("piecewise-linear arclength integrals on a plateau reduce to the trapezoid rule") {
    const std::vector<double> beta{0.0, 0.5, 1.5, 2.0};
    const std::vector<double> s(4, 1.0);
    const std::vector<double> g{1.0, 2.0, -1.0, 0.5};
    const auto r = greens::conv_kernel_arclength_linear(s, beta, g);
    const double trap = 0.25 * 3.0 + 0.5 * 1.0 + 0.25 * -0.5;
    for (double v : r.even_part) CHECK(v == doctest::Approx(trap).epsilon(1e-14));
    CHECK(r.odd_part.front() == doctest::Approx(trap).epsilon(1e-14));
    CHECK(r.odd_part.back() == doctest::Approx(-trap).epsilon(1e-14));
}

TEST_CASE("piecewise-linear arclength integrals reject bad input") {
    const std::vector<double> s{0.0, 1.0, 2.0};
    CHECK_THROWS_AS(greens::conv_kernel_arclength_linear(s, std::vector<double>{0.0, 0.0, 1.0},
                                                         std::vector<double>{1, 1, 1}),
                    InvalidInput);
    CHECK_THROWS_AS(greens::conv_kernel_arclength_linear(std::vector<double>{0.0, 2.0, 1.0},
                                                         std::vector<double>{0.0, 1.0, 2.0},
                                                         std::vector<double>{1, 1, 1}),
                    InvalidInput);
}

TEST_CASE("interval weights integrate linear functions exactly") {
    for (double h : {1e-6, 1e-3, 0.1, 1.0, 10.0}) {
        const auto w = greens::interval_weights(h);
        // composite Gauss-Legendre for int_0^h exp(-(h - s)) (1 - s/h) ds and the s/h moment
        double far = 0.0;
        double near = 0.0;
        const int pieces = 200;
        for (int k = 0; k < pieces; ++k) {
            const double a = h * k / pieces;
            const double b = h * (k + 1) / pieces;
            for (std::size_t q = 0; q < 8; ++q) {
                const double s = a + 0.5 * (oracle::gl_nodes[q] + 1.0) * (b - a);
                const double k0 = std::exp(-(h - s)) * oracle::gl_weights[q] * 0.5 * (b - a);
                far += k0 * (1.0 - s / h);
                near += k0 * s / h;
            }
        }
        CHECK(w.decay == doctest::Approx(std::exp(-h)).epsilon(1e-14));
        CHECK(w.far == doctest::Approx(far).epsilon(1e-12));
        CHECK(w.near == doctest::Approx(near).epsilon(1e-12));
    }
}
