#include <doctest.h>

#include <atomic>
#include <bit>
#include <cstdint>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "moch/config.hpp"
#include "moch/errors.hpp"
#include "moch/harness.hpp"
#include "moch/io.hpp"

using namespace moch;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / ("moch-test-" + name);
    fs::remove_all(p);
    return p;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
    }
    return true;
}

RunConfig small_gaussian(std::size_t n) {
    RunConfig c;
    c.half_width = 12.0;
    c.N = n;
    c.nodes = n;
    c.dt = 2.56 / static_cast<double>(n) / 2.0;
    c.T = 0.4;
    c.output_every = 1;
    return c;
}

}  // namespace

TEST_CASE("config text round trip") {
    const auto c = parse_config(R"(
# a comment
lambda = -0.5
preset = steepening
amplitude = 3   # trailing comment
N = 300
nodes = 200
dt = 2.5e-4
T = 0.75
coefficient_set = as-printed
trace_points = -2, 0.5, 4
seed = 42
)");
    CHECK(c.lambda == -0.5);
    CHECK(c.preset == Preset::steepening);
    CHECK(c.amplitude == 3.0);
    CHECK(c.N == 300);
    CHECK(c.nodes == 200);
    CHECK(c.coefficient_set == CoefficientSet::as_printed);
    CHECK(c.trace_points == std::vector<double>{-2.0, 0.5, 4.0});
    CHECK(c.seed == 42);
    const auto text = render_config(c);
    const auto again = parse_config(text);
    CHECK(render_config(again) == text);
    CHECK(again.dt == c.dt);
    CHECK(again.T == c.T);
}

TEST_CASE("bad configuration is reported") {
    CHECK_THROWS_AS(parse_config("colour = blue"), ConfigurationError);
    CHECK_THROWS_AS(parse_config("N = many"), ConfigurationError);
    CHECK_THROWS_AS(parse_config("dt = 1e-3 extra"), ConfigurationError);
    CHECK_THROWS_AS(parse_config("just a line"), ConfigurationError);
    CHECK_THROWS_AS(parse_config("preset = square"), ConfigurationError);
    RunConfig c;
    c.lambda = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigurationError);
    c = RunConfig{};
    c.dt = -1.0;
    CHECK_THROWS_AS(c.validate(), ConfigurationError);
    c = RunConfig{};
    c.levels = 2;
    CHECK_THROWS_AS(compare_solvers(c), ConfigurationError);
    CHECK_THROWS_AS(load_config("/nonexistent/moch.cfg"), ConfigurationError);
}

TEST_CASE("stored trajectories read back bit for bit") {
    auto c = small_gaussian(128);
    c.preset = Preset::steepening;
    c.amplitude = 3.0;
    c.T = 0.7;
    c.dt = 1e-3;
    c.output_every = 50;
    const auto m0 = initial_state(c, c.N);
    const auto e = simulate_eulerian(m0, c.dt, c.T, c.output_every, eulerian_settings(c));
    const auto l = simulate_lagrangian(init_lagrangian(m0, c.nodes, c.lambda), c.dt, c.T, c.output_every);
    const auto dir = scratch_dir("io");
    io::write_trajectory(dir / "e", e);
    io::write_trajectory(dir / "l", l);
    const auto e2 = io::read_eulerian_trajectory(dir / "e");
    const auto l2 = io::read_lagrangian_trajectory(dir / "l");
    REQUIRE(e2.states.size() == e.states.size());
    REQUIRE(l2.states.size() == l.states.size());
    for (std::size_t k = 0; k < e.states.size(); ++k) {
        CHECK(same_bits(e2.states[k].m, e.states[k].m));
        CHECK(e2.states[k].time == e.states[k].time);
    }
    for (std::size_t k = 0; k < l.states.size(); ++k) {
        CHECK(same_bits(l2.states[k].labels, l.states[k].labels));
        CHECK(same_bits(l2.states[k].beta, l.states[k].beta));
        CHECK(same_bits(l2.states[k].x, l.states[k].x));
        CHECK(same_bits(l2.states[k].m, l.states[k].m));
        CHECK(same_bits(l2.states[k].theta, l.states[k].theta));
    }
    REQUIRE(l2.events.size() == l.events.size());
    REQUIRE_FALSE(l.events.empty());
    CHECK(l2.events.front().time == l.events.front().time);
    CHECK(l2.events.front().theta_rate == l.events.front().theta_rate);
    CHECK(e2.blowup.detected == e.blowup.detected);

    // audits computed from the files equal those computed in memory
    const auto a = audit_trajectories(e, l, 1e-2);
    const auto b = audit_trajectories(e2, l2, 1e-2);
    CHECK(same_bits(a.sup_error, b.sup_error));
    CHECK(a.energy_residual == b.energy_residual);
    CHECK(a.arc_identity == b.arc_identity);
    CHECK(a.lipschitz.speed == b.lipschitz.speed);

    CHECK_THROWS_AS(io::read_eulerian_trajectory(dir / "missing"), InvalidInput);
    fs::remove_all(dir);
}

TEST_CASE("weak form of the zero solution") {
    EulerianState z;
    z.grid = UniformGrid::symmetric(8.0, 128);
    z.m.assign(128, 0.0);
    const auto traj = simulate_eulerian(z, 0.01, 0.5, 1, EulerianSettings{});
    const auto r = weak_form_residual(traj, standard_bumps(0.5));
    REQUIRE(r.balance.size() == 5);
    for (double v : r.balance) CHECK(v == 0.0);
    for (double v : r.gamma_form) CHECK(v == 0.0);
}

TEST_CASE("weak form rejects supports outside the data") {
    auto c = small_gaussian(128);
    const auto traj = simulate_eulerian(initial_state(c, c.N), c.dt, c.T, 1, eulerian_settings(c));
    BumpFunction far{0.2, 0.1, 11.5, 1.0};
    CHECK_THROWS_AS(weak_form_residual(traj, {far}), InvalidInput);
    BumpFunction late{0.4, 0.1, 0.0, 1.0};
    CHECK_THROWS_AS(weak_form_residual(traj, {late}), InvalidInput);
}

TEST_CASE("weak form residuals shrink under refinement") {
    std::vector<double> balance, gamma;
    for (std::size_t n : {256u, 512u, 1024u}) {
        auto c = small_gaussian(n);
        const auto traj = simulate_eulerian(initial_state(c, c.N), c.dt, c.T, 1, eulerian_settings(c));
        const auto r = weak_form_residual(traj, standard_bumps(c.T));
        double b = 0.0, g = 0.0;
        for (double v : r.balance) b = std::max(b, std::abs(v));
        for (double v : r.gamma_form) g = std::max(g, std::abs(v));
        balance.push_back(b);
        gamma.push_back(g);
    }
    CHECK(std::log2(balance[0] / balance[1]) >= 1.0);
    CHECK(std::log2(balance[1] / balance[2]) >= 1.0);
    CHECK(std::log2(gamma[0] / gamma[1]) >= 1.0);
    CHECK(std::log2(gamma[1] / gamma[2]) >= 1.0);
}

TEST_CASE("bump functions") {
    const BumpFunction b{0.5, 0.25, 1.0, 2.0};
    CHECK(b.value(0.5, 1.0) == doctest::Approx(std::exp(-2.0)));
    CHECK(b.value(0.75, 1.0) == 0.0);
    CHECK(b.value(0.5, 3.5) == 0.0);
    const double h = 1e-6;
    for (double t : {0.4, 0.55, 0.7}) {
        for (double x : {-0.5, 0.3, 2.2}) {
            CHECK(b.d_t(t, x) == doctest::Approx((b.value(t + h, x) - b.value(t - h, x)) / (2 * h)).epsilon(1e-6));
            CHECK(b.d_x(t, x) == doctest::Approx((b.value(t, x + h) - b.value(t, x - h)) / (2 * h)).epsilon(1e-6));
        }
    }
    CHECK(standard_bumps(1.0).size() == 5);
}

TEST_CASE("Lipschitz audit") {
    EulerianState zero_state;
    zero_state.grid = UniformGrid::symmetric(8.0, 64);
    zero_state.m.assign(64, 0.0);
    const auto z = lipschitz_audit(simulate_lagrangian(init_lagrangian(zero_state, 64, 1.0), 0.1, 0.5, 1));
    CHECK(z.x_ratio == doctest::Approx(1.0));
    CHECK(z.m_ratio == 0.0);
    CHECK(z.speed == 0.0);
    CHECK(z.passed());

    auto c = small_gaussian(512);
    const auto smooth = lipschitz_audit(
        simulate_lagrangian(init_lagrangian(initial_state(c, c.N), c.nodes, c.lambda), 1e-3, 0.5, 10));
    CHECK(smooth.passed());
    CHECK(smooth.x_ratio <= 1.0 + 1e-2);

    // through the first breaking time
    c = small_gaussian(2048);
    c.preset = Preset::steepening;
    c.amplitude = 3.0;
    const auto l = simulate_lagrangian(init_lagrangian(initial_state(c, c.N), c.nodes, c.lambda), 1e-3, 0.62, 10);
    REQUIRE_FALSE(l.events.empty());
    const auto a = lipschitz_audit(l);
    INFO(a.x_ratio, " ", a.m_ratio, " ", a.speed, " ", a.C_inf + a.C_S);
    CHECK(a.x_ok());
    CHECK(a.m_ok());
    CHECK(a.speed_ok());
    CHECK(a.speed > 0.0);
}

TEST_CASE("comparison on zero data") {
    RunConfig c;
    c.preset = Preset::gaussian;
    c.amplitude = 0.0;
    c.half_width = 8.0;
    c.N = 64;
    c.nodes = 64;
    c.dt = 0.01;
    c.T = 0.1;
    c.output_every = 5;
    const auto r = compare_solvers(c);
    REQUIRE(r.level_error.size() == 3);
    for (double e : r.level_error) CHECK(e == 0.0);
    CHECK(r.audit.energy_residual == 0.0);
    CHECK(r.audit.events.empty());
    CHECK(r.passed());
}

TEST_CASE("parallel_for covers every index and propagates failures") {
    std::vector<std::atomic<int>> hits(97);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (const auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(20,
                                 [](std::size_t i) {
                                     if (i == 13) throw std::runtime_error("thirteen");
                                 }),
                    std::runtime_error);
    parallel_for(0, [](std::size_t) { throw std::runtime_error("never"); });
}

TEST_CASE("thread count follows MOCH_THREADS") {
    const char* old = std::getenv("MOCH_THREADS");
    const std::string saved = old ? old : "";
    ::setenv("MOCH_THREADS", "3", 1);
    CHECK(thread_count() == 3);
    ::setenv("MOCH_THREADS", "zero", 1);
    CHECK(thread_count() >= 1);
    ::unsetenv("MOCH_THREADS");
    CHECK(thread_count() >= 1);
    if (old) ::setenv("MOCH_THREADS", saved.c_str(), 1);
}
