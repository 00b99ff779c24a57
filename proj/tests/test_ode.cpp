#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "viralsim/ode.hpp"

using namespace viralsim;

namespace {

const ode::RhsFn kZeroField = [](double, std::span<const double>,
                                 std::span<double> d) { d[0] = 0.0; };
const ode::RhsFn kUnitField = [](double, std::span<const double>,
                                 std::span<double> d) { d[0] = 1.0; };
const ode::RhsFn kDecayField = [](double, std::span<const double> y,
                                  std::span<double> d) { d[0] = -y[0]; };

ode::OdeProblem scalar_problem(ode::RhsFn rhs, double t_end, double y0) {
    ode::OdeProblem p;
    p.dimension = 1;
    p.rhs = std::move(rhs);
    p.t0 = 0.0;
    p.t_end = t_end;
    p.y0 = {y0};
    return p;
}

ode::RhsFn sir_field(double beta, double gamma, double n) {
    return [beta, gamma, n](double, std::span<const double> y,
                            std::span<double> d) {
        const double transmission = beta * y[0] * y[1] / n;
        const double recovery = gamma * y[1];
        d[0] = -transmission;
        d[1] = transmission - recovery;
        d[2] = recovery;
    };
}

}  // namespace

TEST_CASE("dp45_step: zero field is exact") {
    const std::vector<double> y = {1.0};
    std::vector<double> y_next(1), err(1);
    ode::dp45_step(kZeroField, 0.0, y, 0.37, y_next, err);
    CHECK(y_next[0] == 1.0);
    CHECK(err[0] == 0.0);
}

TEST_CASE("dp45_step: y'=1 advances exactly with zero error estimate") {
    const std::vector<double> y = {0.0};
    std::vector<double> y_next(1), err(1);
    ode::dp45_step(kUnitField, 0.0, y, 0.5, y_next, err);
    CHECK(y_next[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::fabs(err[0]) < 1e-15);
}

TEST_CASE("dp45_step: exponential decay matches the closed form") {
    const std::vector<double> y = {1.0};
    std::vector<double> y_next(1), err(1);
    ode::dp45_step(kDecayField, 0.0, y, 0.1, y_next, err);
    // exp(-0.1) = 0.9048374180359595; one DP45 step lands within 3e-10.
    CHECK(std::fabs(y_next[0] - 0.9048374180359595) < 1e-9);
    CHECK(std::fabs(err[0]) < 1e-8);
    CHECK(std::fabs(err[0]) > 8e-9);  // embedded estimate is ~8.4e-9
}

TEST_CASE("dp45_step: exactly 7 rhs evaluations per call") {
    int calls = 0;
    const ode::RhsFn counting = [&calls](double, std::span<const double> y,
                                         std::span<double> d) {
        ++calls;
        d[0] = -y[0];
    };
    const std::vector<double> y = {1.0};
    std::vector<double> y_next(1), err(1);
    ode::dp45_step(counting, 0.0, y, 0.1, y_next, err);
    CHECK(calls == 7);
}

TEST_CASE("dp45_step: non-finite rhs output reports t and h") {
    const ode::RhsFn broken = [](double, std::span<const double>,
                                 std::span<double> d) {
        d[0] = std::numeric_limits<double>::quiet_NaN();
    };
    const std::vector<double> y = {1.0};
    std::vector<double> y_next(1), err(1);
    try {
        ode::dp45_step(broken, 2.0, y, 0.25, y_next, err);
        FAIL("expected IntegrationError");
    } catch (const ode::IntegrationError& e) {
        CHECK(e.where() == 2.0);
        CHECK(e.step_size() == 0.25);
        CHECK(std::string(e.what()).find("non-finite") != std::string::npos);
    }
}

TEST_CASE("integrate: constant solution sampled everywhere") {
    const auto problem = scalar_problem(kZeroField, 10.0, 7.0);
    const std::vector<double> samples = {0.0, 1.5, 4.0, 10.0};
    const ode::SolutionSeries series = ode::integrate(problem, {}, samples);
    REQUIRE(series.states.size() == samples.size());
    CHECK(series.times == samples);
    for (const auto& state : series.states) CHECK(state[0] == 7.0);
}

TEST_CASE("integrate: exponential decay at tight tolerance") {
    const auto problem = scalar_problem(kDecayField, 1.0, 1.0);
    ode::StepControl control;
    control.rtol = 1e-8;
    control.atol = 1e-8;
    const std::vector<double> samples = {0.0, 1.0};
    const ode::SolutionSeries series =
        ode::integrate(problem, control, samples);
    CHECK(std::fabs(series.states.back()[0] - 0.36787944117144233) < 1e-7);
    CHECK(series.steps_taken >= 1);
}

TEST_CASE("integrate: first state is y0 bit-for-bit") {
    const auto problem = scalar_problem(kDecayField, 1.0, 0.123456789);
    const std::vector<double> samples = {0.0, 0.5, 1.0};
    const ode::SolutionSeries series = ode::integrate(problem, {}, samples);
    CHECK(series.states.front()[0] == 0.123456789);
}

TEST_CASE("integrate: SIR trajectory agrees with the fixed-step RK4 oracle") {
    ode::OdeProblem problem;
    problem.dimension = 3;
    problem.rhs = sir_field(0.25, 0.1, 1000.0);
    problem.t0 = 0.0;
    problem.t_end = 100.0;
    problem.y0 = {900.0, 100.0, 0.0};
    const std::vector<double> samples = {0.0, 25.0, 50.0, 75.0, 100.0};

    ode::StepControl control;
    control.rtol = 1e-10;
    control.atol = 1e-12;
    const ode::SolutionSeries adaptive =
        ode::integrate(problem, control, samples);
    const ode::SolutionSeries reference =
        ode::rk4_reference(problem, 1e-3, samples);

    double max_diff = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k)
        for (int c = 0; c < 3; ++c)
            max_diff = std::max(max_diff,
                                std::fabs(adaptive.states[k][c] -
                                          reference.states[k][c]));
    CHECK(max_diff <= 1e-4);
}

TEST_CASE("integrate: max_steps failure names the time reached") {
    const auto problem = scalar_problem(kDecayField, 1.0, 1.0);
    ode::StepControl control;
    control.max_steps = 3;
    control.h_init = 1e-6;
    const std::vector<double> samples = {0.0, 1.0};
    CHECK_THROWS_AS(ode::integrate(problem, control, samples),
                    ode::IntegrationError);
}

TEST_CASE("integrate: rejects malformed sample grids") {
    const auto problem = scalar_problem(kZeroField, 1.0, 0.0);
    CHECK_THROWS_AS(
        ode::integrate(problem, {}, std::vector<double>{0.0, 0.5}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        ode::integrate(problem, {}, std::vector<double>{0.25, 1.0}),
        std::invalid_argument);
    CHECK_THROWS_AS(ode::integrate(problem, {}, std::vector<double>{0.0}),
                    std::invalid_argument);
}

TEST_CASE("integrate: determinism is bitwise") {
    ode::OdeProblem problem;
    problem.dimension = 3;
    problem.rhs = sir_field(0.25, 0.1, 1000.0);
    problem.t0 = 0.0;
    problem.t_end = 50.0;
    problem.y0 = {900.0, 100.0, 0.0};
    std::vector<double> samples;
    for (int k = 0; k <= 100; ++k) samples.push_back(0.5 * k);

    const ode::SolutionSeries a = ode::integrate(problem, {}, samples);
    const ode::SolutionSeries b = ode::integrate(problem, {}, samples);
    CHECK(a.times == b.times);
    CHECK(a.states == b.states);
    CHECK(a.steps_taken == b.steps_taken);
    CHECK(a.steps_rejected == b.steps_rejected);
}

TEST_CASE("integrate: tightening rtol never hurts the final error") {
    const auto problem = scalar_problem(kDecayField, 1.0, 1.0);
    const std::vector<double> samples = {0.0, 1.0};
    const double exact = 0.36787944117144233;
    double previous = std::numeric_limits<double>::infinity();
    for (double rtol : {1e-2, 1e-4, 1e-6, 1e-8}) {
        ode::StepControl control;
        control.rtol = rtol;
        control.atol = 1e-14;
        const ode::SolutionSeries series =
            ode::integrate(problem, control, samples);
        const double err = std::fabs(series.states.back()[0] - exact);
        CHECK(err <= previous);
        previous = err;
    }
}

TEST_CASE("rk4_reference: trivial fields") {
    SUBCASE("constant solution") {
        const auto problem = scalar_problem(kZeroField, 2.0, 3.5);
        const std::vector<double> samples = {0.0, 1.0, 2.0};
        const ode::SolutionSeries series =
            ode::rk4_reference(problem, 0.1, samples);
        for (const auto& state : series.states) CHECK(state[0] == 3.5);
    }
    SUBCASE("unit slope hits the grid exactly, including a clamped substep") {
        const auto problem = scalar_problem(kUnitField, 2.0, 0.0);
        const std::vector<double> samples = {0.0, 1.0, 2.0};
        // h = 0.3 does not divide 1.0; the final substep is clamped.
        const ode::SolutionSeries series =
            ode::rk4_reference(problem, 0.3, samples);
        CHECK(series.states[0][0] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(series.states[1][0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(series.states[2][0] == doctest::Approx(2.0).epsilon(1e-12));
    }
}

TEST_CASE("rk4_reference: exponential decay with h=1e-3") {
    const auto problem = scalar_problem(kDecayField, 1.0, 1.0);
    const std::vector<double> samples = {0.0, 1.0};
    const ode::SolutionSeries series =
        ode::rk4_reference(problem, 1e-3, samples);
    CHECK(std::fabs(series.states.back()[0] - 0.36787944117144233) <= 1e-9);
}

TEST_CASE("both integrators are exact on polynomial fields") {
    // rhs = a + b t + c t^2 + d t^3 depends only on t, so DP45 (order 5)
    // and RK4 (Simpson quadrature, exact through cubics) must reproduce the
    // quartic solution to rounding.
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> coeff(0.1, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = coeff(rng), b = coeff(rng), c = coeff(rng),
                     d = coeff(rng);
        const double t_end = 1.0 + 0.2 * trial;
        ode::OdeProblem problem;
        problem.dimension = 1;
        problem.t0 = 0.0;
        problem.t_end = t_end;
        problem.y0 = {0.5};
        problem.rhs = [a, b, c, d](double t, std::span<const double>,
                                   std::span<double> out) {
            out[0] = a + t * (b + t * (c + t * d));
        };
        const double exact = 0.5 + a * t_end + b * t_end * t_end / 2.0 +
                             c * t_end * t_end * t_end / 3.0 +
                             d * t_end * t_end * t_end * t_end / 4.0;
        const std::vector<double> samples = {0.0, t_end};

        const double adaptive =
            ode::integrate(problem, {}, samples).states.back()[0];
        CHECK(std::fabs(adaptive - exact) < 1e-12 * std::fabs(exact));

        const double rk4 =
            ode::rk4_reference(problem, t_end / 64.0, samples)
                .states.back()[0];
        CHECK(std::fabs(rk4 - exact) < 1e-12 * std::fabs(exact));
    }
}

TEST_CASE("dp45_fixed: halving the step cuts the error by 2^4..2^6") {
    const auto problem = scalar_problem(kDecayField, 1.0, 1.0);
    const std::vector<double> samples = {0.0, 1.0};
    const double exact = 0.36787944117144233;
    const double e1 = std::fabs(
        ode::dp45_fixed(problem, 0.1, samples).states.back()[0] - exact);
    const double e2 = std::fabs(
        ode::dp45_fixed(problem, 0.05, samples).states.back()[0] - exact);
    const double ratio = e1 / e2;
    CHECK(ratio >= 16.0);
    CHECK(ratio <= 64.0);
}

TEST_CASE("StepControl validation") {
    const auto problem = scalar_problem(kZeroField, 1.0, 0.0);
    const std::vector<double> samples = {0.0, 1.0};
    ode::StepControl control;
    control.rtol = -1.0;
    CHECK_THROWS_AS(ode::integrate(problem, control, samples),
                    std::invalid_argument);
    control = {};
    control.safety = 1.5;
    CHECK_THROWS_AS(ode::integrate(problem, control, samples),
                    std::invalid_argument);
    control = {};
    control.min_scale = 2.0;
    CHECK_THROWS_AS(ode::integrate(problem, control, samples),
                    std::invalid_argument);
}

TEST_CASE("post_accept hook runs on accepted states") {
    auto problem = scalar_problem(kDecayField, 1.0, 1.0);
    int invocations = 0;
    problem.post_accept = [&invocations](double, std::span<double>) {
        ++invocations;
    };
    const std::vector<double> samples = {0.0, 1.0};
    const ode::SolutionSeries series = ode::integrate(problem, {}, samples);
    CHECK(invocations == series.steps_taken);
}
