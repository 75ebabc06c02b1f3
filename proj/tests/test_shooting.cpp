#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "langmuir/shooting.hpp"
#include "oracles.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <numbers>

using namespace langmuir;

namespace {

bool bit_identical(const ShootResult& a, const ShootResult& b)
{
    const auto same = [](double x, double y) { return std::memcmp(&x, &y, sizeof x) == 0; };
    return same(a.h, b.h) && same(a.t_h, b.t_h) && same(a.alpha, b.alpha) && a.state_at_th == b.state_at_th &&
           a.n_magical_crossings == b.n_magical_crossings && same(a.energy_drift, b.energy_drift) &&
           a.status == b.status && a.message == b.message;
}

} // namespace

TEST_CASE("shoot returns the first x-rest below the time bound")
{
    IntegratorSettings st;
    for (double h : {1.398, 3.4}) {
        const ShootResult r = shoot(-1.0, h, st);
        CHECK(r.status == ShootStatus::Ok);
        CHECK(r.t_h > 0.0);
        CHECK(r.t_h < 6.116);
        CHECK(std::abs(r.state_at_th.vx) <= 1e-10);
        CHECK(r.alpha == r.state_at_th.vy);
        CHECK(r.n_magical_crossings >= (h < 2.0 ? 1 : 0));
    }
    CHECK(alpha_k(-1.0, 1.0, 1, st) == shoot(-1.0, 1.0, st).alpha);
    CHECK_THROWS_AS(alpha_k(-1.0, 1.0, 0, st), std::invalid_argument);
}

TEST_CASE("shoot reports NoRest when the run ends first")
{
    IntegratorSettings st;
    st.t_limit = 0.05;
    CHECK_THROWS_AS(shoot(-1.0, 1.0, st), NoRest);
    const auto scan = scan_alpha(-1.0, std::vector<double>{1.0, 2.0}, st);
    CHECK(scan[0].status == ShootStatus::NoRest);
    CHECK_FALSE(scan[0].message.empty());
}

TEST_CASE("invalid heights are recorded as failures in a scan")
{
    const auto scan = scan_alpha_serial(-1.0, std::vector<double>{1.0, 4.0}, IntegratorSettings{});
    CHECK(scan[0].status == ShootStatus::Ok);
    CHECK(scan[1].status == ShootStatus::Failed);
}

TEST_CASE("the default grid has exactly one sign change of alpha")
{
    const auto scan = scan_alpha(-1.0, default_scan_grid(-1.0), IntegratorSettings{});
    REQUIRE(scan.size() == 50);
    const auto brackets = sign_change_brackets(scan);
    REQUIRE(brackets.size() == 1);
    CHECK(brackets[0].first < 1.398);
    CHECK(brackets[0].second > 1.398);
}

TEST_CASE("parallel scan is bit-identical to the serial reference")
{
    const auto grid = uniform_grid(0.05, 3.45, 37);
    const IntegratorSettings st;
    const auto serial = scan_alpha_serial(-1.0, grid, st);
    for (const char* threads : {"1", "3", "8"}) {
        ::setenv("LANGMUIR_LAB_THREADS", threads, 1);
        CHECK(worker_count() == std::atoi(threads));
        const auto parallel = scan_alpha(-1.0, grid, st);
        REQUIRE(parallel.size() == serial.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(bit_identical(parallel[i], serial[i]));
        }
    }
    ::unsetenv("LANGMUIR_LAB_THREADS");
    CHECK(worker_count() >= 1);
}

TEST_CASE("refine_scan narrows the sign-change bracket")
{
    const IntegratorSettings st;
    const auto coarse = scan_alpha(-1.0, uniform_grid(0.5, 3.0, 6), st);
    const auto fine = refine_scan(-1.0, coarse, 4, st);
    const auto b0 = sign_change_brackets(coarse);
    const auto b1 = sign_change_brackets(fine);
    REQUIRE(b0.size() == 1);
    REQUIRE(b1.size() == 1);
    CHECK((b1[0].second - b1[0].first) == doctest::Approx((b0[0].second - b0[0].first) / 16));
    CHECK(fine.size() == coarse.size() + 4);
}

TEST_CASE("uniform grids")
{
    CHECK(uniform_grid(1.0, 1.0, 1) == std::vector<double>{1.0});
    const auto g = uniform_grid(0.0, 1.0, 5);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    CHECK(g[2] == 0.5);
    CHECK_THROWS_AS(uniform_grid(0.0, 1.0, 0), std::invalid_argument);
    const auto d = default_scan_grid(-2.0);
    CHECK(d.front() == doctest::Approx(0.025));
    CHECK(d.back() == doctest::Approx(1.725));
}

TEST_CASE("bracketed root on an analytic function")
{
    std::vector<BracketStep> trace;
    const auto [x, fx] = bracketed_root([](double x) { return std::cos(x); }, 1.0, 2.0, {1e-12, 200}, &trace);
    CHECK(x == doctest::Approx(std::numbers::pi / 2).epsilon(1e-11));
    CHECK(std::abs(fx) <= 1e-12);
    REQUIRE_FALSE(trace.empty());
    for (const BracketStep& s : trace) {
        CHECK(s.h_trial > s.h_lo);
        CHECK(s.h_trial < s.h_hi);
    }
    // The secant steps make this far quicker than pure bisection.
    CHECK(trace.size() < 15);
}

TEST_CASE("bracketed root failure modes")
{
    const auto f = [](double x) { return x * x + 1.0; };
    CHECK_THROWS_AS(bracketed_root(f, -1.0, 1.0, {}), BadBracket);
    CHECK_THROWS_AS(bracketed_root([](double x) { return x - 0.123; }, 0.0, 1.0, {1e-300, 1}), NoConvergence);
    const auto exact = bracketed_root([](double x) { return x - 1.0; }, 1.0, 2.0, {});
    CHECK(exact.first == 1.0);
}

TEST_CASE("Langmuir orbit at E = -1")
{
    const IntegratorSettings st;
    const OrbitRecord rec = find_langmuir_orbit(-1.0, default_langmuir_bracket(-1.0), st);
    CHECK(std::abs(rec.h_star - 1.398) <= 0.02);
    CHECK(std::abs(rec.alpha_residual) <= 1e-8);
    CHECK(rec.touch_state.speed() <= 1e-6);
    CHECK(rec.kind == OrbitKind::Langmuir);
    CHECK(rec.reflection_count == 1);
    CHECK(rec.quarter_period == rec.touch_state.t);
    CHECK_FALSE(rec.solver_trace.empty());

    // The touch point lies on the zero-velocity curve.
    CHECK(std::abs(oracle::potential(rec.touch_state.x, rec.touch_state.y) + 1.0) <= 1e-10);

    // Tolerance study: h* is stable far beyond the three digits quoted for it.
    IntegratorSettings fine = st;
    fine.rel_tol = st.rel_tol / 10;
    const OrbitRecord ref = find_langmuir_orbit(-1.0, default_langmuir_bracket(-1.0), fine);
    CHECK(std::abs(ref.h_star - rec.h_star) <= 1e-6);
}

TEST_CASE("orbit heights scale as -1/E")
{
    const IntegratorSettings st;
    const double h1 = find_langmuir_orbit(-1.0, default_langmuir_bracket(-1.0), st).h_star;
    for (double e : {-2.0, -0.5}) {
        const double he = find_langmuir_orbit(e, default_langmuir_bracket(e), st).h_star;
        CHECK(std::abs(he - h1 / -e) <= 1e-5);
    }
}

TEST_CASE("orbit search rejects bad input")
{
    const IntegratorSettings st;
    CHECK_THROWS_AS(find_langmuir_orbit(-1.0, {2.0, 3.0}, st), BadBracket);
    CHECK_THROWS_AS(find_langmuir_orbit(-1.0, {3.0, 2.0}, st), BadBracket);
    CHECK_THROWS_AS(find_langmuir_orbit(-1.0, {0.0, 2.0}, st), BadBracket);
    CHECK_THROWS_AS(find_langmuir_orbit(0.0, {0.5, 3.0}, st), std::invalid_argument);
    CHECK_THROWS_AS(find_langmuir_orbit(-1.0, {0.5, 3.0}, st, {1e-8, 2}), NoConvergence);
    CHECK_THROWS_AS(find_brake_orbit(-1.0, {0.3, 0.8}, 0, st), std::invalid_argument);
}

TEST_CASE("the second orbit brakes at the third x-rest")
{
    const IntegratorSettings st;
    const auto bracket = default_brake_bracket(-1.0);
    CHECK(bracket == std::pair{0.3, 0.8});
    const int k = classify_reflection_count(-1.0, bracket, st);
    REQUIRE(k == 3);
    CHECK((alpha_k(-1.0, 0.3, k, st) < 0.0) != (alpha_k(-1.0, 0.8, k, st) < 0.0));
    for (int j = 1; j < k; ++j) {
        CHECK((alpha_k(-1.0, 0.3, j, st) < 0.0) == (alpha_k(-1.0, 0.8, j, st) < 0.0));
    }

    const OrbitRecord rec = find_brake_orbit(-1.0, bracket, k, st);
    CHECK(rec.h_star > 0.3);
    CHECK(rec.h_star < 0.8);
    CHECK(rec.touch_state.speed() <= 1e-6);
    CHECK(rec.kind == OrbitKind::Brake);
    CHECK(rec.reflection_count == 3);
}

TEST_CASE("assembled orbits close after four quarter periods")
{
    const IntegratorSettings st;
    const OrbitRecord lang = find_langmuir_orbit(-1.0, default_langmuir_bracket(-1.0), st);
    const OrbitRecord brake = find_brake_orbit(-1.0, default_brake_bracket(-1.0), 3, st);
    for (const OrbitRecord& rec : {lang, brake}) {
        const Trajectory orbit = assemble_periodic_orbit(rec, st);
        const State& first = orbit.samples.front();
        const State& last = orbit.back();
        CHECK(last.t == doctest::Approx(4.0 * rec.quarter_period).epsilon(1e-15));
        CHECK(std::abs(last.x - first.x) <= 1e-12);
        CHECK(std::abs(last.y - first.y) <= 1e-12);
        for (std::size_t i = 1; i < orbit.samples.size(); ++i) {
            CHECK(orbit.samples[i].t > orbit.samples[i - 1].t);
        }
        // Half point: the mirror image of the start with reversed momentum.
        IntegratorSettings half = st;
        half.t_limit = 2.0 * rec.quarter_period;
        const State mid = integrate(initial_state({-1.0, rec.h_star}), half).back();
        CHECK(std::abs(mid.x) <= 1e-6);
        CHECK(std::abs(mid.y - rec.h_star) <= 1e-6);
    }

    // Independent periodicity oracle for the Langmuir orbit: one full period of direct integration.
    IntegratorSettings full = st;
    full.t_limit = 4.0 * lang.quarter_period;
    const State s0 = initial_state({-1.0, lang.h_star});
    const State s1 = integrate(s0, full).back();
    CHECK(std::abs(s1.x - s0.x) <= 1e-6);
    CHECK(std::abs(s1.y - s0.y) <= 1e-6);
    CHECK(std::abs(s1.vx - s0.vx) <= 1e-6);
    CHECK(std::abs(s1.vy - s0.vy) <= 1e-6);
}

TEST_CASE("assembly refuses a record that is not a brake orbit")
{
    const IntegratorSettings st;
    OrbitRecord rec = find_langmuir_orbit(-1.0, default_langmuir_bracket(-1.0), st);
    rec.h_star = 1.2;
    rec.touch_state = shoot(-1.0, 1.2, st).state_at_th;
    rec.quarter_period = rec.touch_state.t;
    CHECK_THROWS_AS(assemble_periodic_orbit(rec, st), ClosureFailure);
}

TEST_CASE("orbit kind names")
{
    CHECK(orbit_kind_from_string(to_string(OrbitKind::Brake)) == OrbitKind::Brake);
    CHECK(orbit_kind_from_string("langmuir") == OrbitKind::Langmuir);
    CHECK_THROWS_AS(orbit_kind_from_string("circular"), std::invalid_argument);
    CHECK(to_string(ShootStatus::NoRest) == "NoRest");
}
