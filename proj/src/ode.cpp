#include "viralsim/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace viralsim::ode {

namespace {

// Dormand-Prince 5(4) tableau, exact rationals. Coefficients from
// J.R. Dormand & P.J. Prince, "A family of embedded Runge-Kutta formulae",
// J. Comp. Appl. Math. 6 (1980) 19-26; also Hairer, Norsett & Wanner,
// "Solving Ordinary Differential Equations I", 2nd ed., table II.5.2.
constexpr double c2 = 1.0 / 5.0;
constexpr double c3 = 3.0 / 10.0;
constexpr double c4 = 4.0 / 5.0;
constexpr double c5 = 8.0 / 9.0;

constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
// Row 7 equals the 5th-order weights (FSAL structure).
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;

// b(5th) - b(4th): the embedded error-estimate weights.
constexpr double e1 = 71.0 / 57600.0;
constexpr double e3 = -71.0 / 16695.0;
constexpr double e4 = 71.0 / 1920.0;
constexpr double e5 = -17253.0 / 339200.0;
constexpr double e6 = 22.0 / 525.0;
constexpr double e7 = -1.0 / 40.0;

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

std::string describe(const char* what, double t, double h) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s at t=%.17g (step h=%.17g)", what, t, h);
    return buf;
}

void eval_stage(const RhsFn& rhs, double t, std::span<const double> y,
                std::span<double> k, double h) {
    rhs(t, y, k);
    if (!all_finite(k))
        throw IntegrationError(
            describe("rhs produced a non-finite value", t, h), t, h);
}

// Shared driver for the fixed-step integrators: runs from sample to sample
// with constant step h, clamping the final substep onto each sample time.
SolutionSeries fixed_step_series(
    const OdeProblem& problem, double h, std::span<const double> sample_times,
    const std::function<void(double t, std::span<const double> y, double hs,
                             std::span<double> y_next)>& advance) {
    validate(problem);
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("fixed step h must be positive and finite");
    if (sample_times.size() < 2 || sample_times.front() != problem.t0 ||
        sample_times.back() != problem.t_end)
        throw std::invalid_argument(
            "sample_times must start at t0 and end at t_end");

    const std::size_t dim = static_cast<std::size_t>(problem.dimension);
    SolutionSeries out;
    out.times.assign(sample_times.begin(), sample_times.end());
    out.states.reserve(sample_times.size());
    out.states.push_back(problem.y0);

    std::vector<double> y = problem.y0;
    std::vector<double> y_next(dim);
    double t = problem.t0;
    for (std::size_t k = 1; k < sample_times.size(); ++k) {
        const double ts = sample_times[k];
        if (!(ts > t))
            throw std::invalid_argument("sample_times must be strictly increasing");
        while (t < ts) {
            const bool last = h >= ts - t;
            const double hs = last ? ts - t : h;
            advance(t, y, hs, y_next);
            if (!all_finite(y_next))
                throw IntegrationError(describe("non-finite state", t, hs), t, hs);
            y.swap(y_next);
            t = last ? ts : t + h;
            if (problem.post_accept) problem.post_accept(t, y);
            ++out.steps_taken;
        }
        out.states.push_back(y);
    }
    return out;
}

}  // namespace

void validate(const StepControl& c) {
    if (!(c.rtol > 0.0) || !std::isfinite(c.rtol))
        throw std::invalid_argument("StepControl: rtol must be > 0");
    if (!(c.atol >= 0.0) || !std::isfinite(c.atol))
        throw std::invalid_argument("StepControl: atol must be >= 0");
    if (!(c.safety > 0.0 && c.safety < 1.0))
        throw std::invalid_argument("StepControl: safety must be in (0,1)");
    if (!(c.min_scale > 0.0 && c.min_scale < 1.0 && c.max_scale > 1.0))
        throw std::invalid_argument(
            "StepControl: need 0 < min_scale < 1 < max_scale");
    if (c.h_init && !(*c.h_init > 0.0 && std::isfinite(*c.h_init)))
        throw std::invalid_argument("StepControl: h_init must be positive");
    if (c.max_steps < 1)
        throw std::invalid_argument("StepControl: max_steps must be >= 1");
}

void validate(const OdeProblem& p) {
    if (p.dimension < 1)
        throw std::invalid_argument("OdeProblem: dimension must be >= 1");
    if (!p.rhs) throw std::invalid_argument("OdeProblem: rhs must be set");
    if (!(p.t_end > p.t0))
        throw std::invalid_argument("OdeProblem: t_end must exceed t0");
    if (p.y0.size() != static_cast<std::size_t>(p.dimension))
        throw std::invalid_argument("OdeProblem: y0 size != dimension");
}

void dp45_step(const RhsFn& rhs, double t, std::span<const double> y, double h,
               std::span<double> y_next, std::span<double> err_estimate) {
    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> w(n);

    eval_stage(rhs, t, y, k1, h);
    for (std::size_t i = 0; i < n; ++i) w[i] = y[i] + h * (a21 * k1[i]);
    eval_stage(rhs, t + c2 * h, w, k2, h);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    eval_stage(rhs, t + c3 * h, w, k3, h);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    eval_stage(rhs, t + c4 * h, w, k4, h);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = y[i] +
               h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    eval_stage(rhs, t + c5 * h, w, k5, h);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                           a64 * k4[i] + a65 * k5[i]);
    eval_stage(rhs, t + h, w, k6, h);
    for (std::size_t i = 0; i < n; ++i)
        y_next[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                b5 * k5[i] + b6 * k6[i]);
    eval_stage(rhs, t + h, y_next, k7, h);
    for (std::size_t i = 0; i < n; ++i)
        err_estimate[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                               e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
}

void rk4_step(const RhsFn& rhs, double t, std::span<const double> y, double h,
              std::span<double> y_next) {
    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), w(n);
    eval_stage(rhs, t, y, k1, h);
    for (std::size_t i = 0; i < n; ++i) w[i] = y[i] + 0.5 * h * k1[i];
    eval_stage(rhs, t + 0.5 * h, w, k2, h);
    for (std::size_t i = 0; i < n; ++i) w[i] = y[i] + 0.5 * h * k2[i];
    eval_stage(rhs, t + 0.5 * h, w, k3, h);
    for (std::size_t i = 0; i < n; ++i) w[i] = y[i] + h * k3[i];
    eval_stage(rhs, t + h, w, k4, h);
    for (std::size_t i = 0; i < n; ++i)
        y_next[i] =
            y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

SolutionSeries integrate(const OdeProblem& problem, const StepControl& control,
                         std::span<const double> sample_times) {
    validate(problem);
    validate(control);
    if (sample_times.size() < 2)
        throw std::invalid_argument("integrate: need at least two sample times");
    if (sample_times.front() != problem.t0 ||
        sample_times.back() != problem.t_end)
        throw std::invalid_argument(
            "integrate: sample_times must start at t0 and end at t_end");

    const std::size_t dim = static_cast<std::size_t>(problem.dimension);
    SolutionSeries out;
    out.times.assign(sample_times.begin(), sample_times.end());
    out.states.reserve(sample_times.size());
    out.states.push_back(problem.y0);

    std::vector<double> y = problem.y0;
    std::vector<double> y_next(dim), err_vec(dim);
    double t = problem.t0;
    double h = control.h_init.value_or((problem.t_end - problem.t0) / 100.0);
    long attempts = 0;

    for (std::size_t k = 1; k < sample_times.size(); ++k) {
        const double ts = sample_times[k];
        if (!(ts > t))
            throw std::invalid_argument(
                "integrate: sample_times must be strictly increasing");
        while (t < ts) {
            const bool clamped = h >= ts - t;
            const double h_try = clamped ? ts - t : h;
            if (++attempts > control.max_steps)
                throw IntegrationError(
                    describe("maximum step count exceeded", t, h_try), t, h_try);

            dp45_step(problem.rhs, t, y, h_try, y_next, err_vec);

            double err;
            if (!all_finite(y_next) || !all_finite(err_vec)) {
                err = 1e10;  // force rejection, overflow in the combination
            } else {
                double sum_sq = 0.0;
                for (std::size_t i = 0; i < dim; ++i) {
                    const double scale =
                        control.atol +
                        control.rtol *
                            std::max(std::fabs(y[i]), std::fabs(y_next[i]));
                    const double r = err_vec[i] / scale;
                    sum_sq += r * r;
                }
                err = std::sqrt(sum_sq / static_cast<double>(dim));
            }

            if (err <= 1.0) {
                t = clamped ? ts : t + h_try;
                y = y_next;
                if (problem.post_accept) problem.post_accept(t, y);
                if (!all_finite(y))
                    throw IntegrationError(describe("non-finite state", t, h_try),
                                           t, h_try);
                ++out.steps_taken;
            } else {
                ++out.steps_rejected;
            }

            const double scale =
                err == 0.0 ? control.max_scale
                           : std::clamp(control.safety * std::pow(err, -0.2),
                                        control.min_scale, control.max_scale);
            h = h_try * scale;
            if (!(h > std::fabs(t) * 1e-16 + 1e-300))
                throw IntegrationError(describe("step size underflow", t, h), t,
                                       h);
        }
        out.states.push_back(y);
    }
    return out;
}

SolutionSeries rk4_reference(const OdeProblem& problem, double h,
                             std::span<const double> sample_times) {
    return fixed_step_series(
        problem, h, sample_times,
        [&problem](double t, std::span<const double> y, double hs,
                   std::span<double> y_next) {
            rk4_step(problem.rhs, t, y, hs, y_next);
        });
}

SolutionSeries dp45_fixed(const OdeProblem& problem, double h,
                          std::span<const double> sample_times,
                          const StepFn& step) {
    validate(problem);
    if (!step) throw std::invalid_argument("dp45_fixed: step must be set");
    std::vector<double> err(static_cast<std::size_t>(problem.dimension));
    return fixed_step_series(
        problem, h, sample_times,
        [&problem, &step, &err](double t, std::span<const double> y, double hs,
                                std::span<double> y_next) {
            step(problem.rhs, t, y, hs, y_next, err);
        });
}

}  // namespace viralsim::ode
