#include <doctest.h>

#include <cmath>
#include <vector>

#include "moch/errors.hpp"
#include "moch/transform.hpp"

using namespace moch;

namespace {

EulerianState state_of(const UniformGrid& g, double (*f)(double)) {
    EulerianState s;
    s.grid = g;
    for (double x : g.abscissae()) s.m.push_back(f(x));
    return s;
}

double gaussian(double x) { return std::exp(-x * x); }

GammaField gamma_of(const UniformGrid& g, double (*f)(double)) {
    GammaField gm;
    gm.grid = g;
    for (double x : g.abscissae()) gm.gamma.push_back(f(x));
    return gm;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b, std::size_t skip = 0) {
    double d = 0.0;
    for (std::size_t i = skip; i + skip < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

TEST_CASE("zero maps to zero both ways") {
    const auto g = UniformGrid::symmetric(10.0, 201);
    GammaField zero{g, std::vector<double>(201, 0.0), 0.0};
    const auto inv = gamma_to_m(zero);
    for (double v : inv.state.m) CHECK(v == 0.0);
    const auto back = m_to_gamma(inv.state);
    for (double v : back.gamma) CHECK(v == 0.0);
}

TEST_CASE("constant m gives gamma = -c") {
    const auto g = UniformGrid::symmetric(5.0, 101);
    EulerianState s{g, std::vector<double>(101, 1.75), 0.0};
    for (double v : m_to_gamma(s).gamma) CHECK(v == doctest::Approx(-1.75).epsilon(1e-13));
}

TEST_CASE("gamma of a Gaussian is second-order accurate") {
    double previous = 0.0;
    for (std::size_t n : {401u, 801u, 1601u}) {
        const auto g = UniformGrid::symmetric(10.0, n);
        const auto gm = m_to_gamma(state_of(g, gaussian));
        std::vector<double> exact;
        for (double x : g.abscissae()) exact.push_back((-2.0 * x - 1.0) * std::exp(-x * x));
        const double err = sup_diff(gm.gamma, exact);
        if (previous > 0.0) CHECK(previous / err == doctest::Approx(4.0).epsilon(0.05));
        previous = err;
    }
}

TEST_CASE("round trip recovers the Gaussian to second order") {
    double previous = 0.0;
    for (std::size_t n : {401u, 801u, 1601u}) {
        const auto g = UniformGrid::symmetric(12.0, n);
        const auto m = state_of(g, gaussian);
        const auto back = gamma_to_m(m_to_gamma(m)).state;
        const double err = sup_diff(back.m, m.m);
        CHECK(err <= 5.0 * g.spacing * g.spacing * h1_norm(m));
        if (previous > 0.0) CHECK(previous / err == doctest::Approx(4.0).epsilon(0.1));
        previous = err;
    }
}

TEST_CASE("inversion residual is second order for generic smooth input") {
    double previous = 0.0;
    for (std::size_t n : {401u, 801u, 1601u}) {
        const auto g = UniformGrid::symmetric(12.0, n);
        const auto inv = gamma_to_m(gamma_of(g, [](double x) {
            return -(1.0 + 2.0 * x) * std::exp(-x * x) * std::exp(0.3 * std::sin(x));
        }));
        if (previous > 0.0) CHECK(previous / inv.residual == doctest::Approx(4.0).epsilon(0.15));
        previous = inv.residual;
    }
    CHECK(previous < 1e-3);
}

TEST_CASE("inversion keeps time and grid") {
    const auto g = UniformGrid::symmetric(8.0, 161);
    auto gm = gamma_of(g, [](double x) { return std::exp(-x * x); });
    gm.time = 0.25;
    const auto inv = gamma_to_m(gm);
    CHECK(inv.state.time == 0.25);
    CHECK(inv.state.grid.count == g.count);
    CHECK(inv.state.m.back() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gamma not decayed at the edges is rejected") {
    const auto g = UniformGrid::symmetric(3.0, 61);
    CHECK_THROWS_AS(gamma_to_m(gamma_of(g, [](double) { return 1.0; })), BoundaryTruncationError);
    CHECK_THROWS_AS(gamma_to_m(gamma_of(g, [](double x) { return std::exp(-(x + 3.0) * (x + 3.0)); })),
                    BoundaryTruncationError);
}

TEST_CASE("state validation") {
    EulerianState s{UniformGrid::symmetric(1.0, 11), std::vector<double>(10, 0.0), 0.0};
    CHECK_THROWS_AS(validate(s), InvalidInput);
    s.m.assign(11, 0.0);
    s.m[3] = INFINITY;
    CHECK_THROWS_AS(validate(s), InvalidInput);
    s.m[3] = 0.0;
    s.grid.spacing = -1.0;
    CHECK_THROWS_AS(validate(s), InvalidInput);
}

TEST_CASE("norms of a Gaussian") {
    const auto g = UniformGrid::symmetric(10.0, 2001);
    const auto s = state_of(g, gaussian);
    // int e^{-2x^2} = sqrt(pi/2), int 4x^2 e^{-2x^2} = sqrt(pi/2)
    const double l2 = std::sqrt(std::sqrt(M_PI / 2.0));
    CHECK(l2_norm(g, s.m) == doctest::Approx(l2).epsilon(1e-8));
    CHECK(h1_norm(s) == doctest::Approx(std::sqrt(2.0) * l2).epsilon(1e-4));
}
