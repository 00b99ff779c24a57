// Explicit Runge-Kutta integrators for first-order ODE systems:
// an adaptive Dormand-Prince 5(4) pair plus fixed-step drivers
// (classical RK4 and fixed-step DP45) used as verification baselines.
#ifndef VIRALSIM_ODE_HPP
#define VIRALSIM_ODE_HPP

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace viralsim::ode {

// dy/dt = f(t, y); writes the derivative into `dydt` (same length as `y`).
using RhsFn = std::function<void(double t, std::span<const double> y,
                                 std::span<double> dydt)>;

// Optional hook applied to the state after every accepted step
// (projection / clamping; may throw to abort the integration).
using PostAcceptFn = std::function<void(double t, std::span<double> y)>;

// One embedded-pair step: advances y by h and reports an error estimate.
// Same shape as dp45_step so alternate steppers can be swapped in.
using StepFn = std::function<void(const RhsFn& rhs, double t,
                                  std::span<const double> y, double h,
                                  std::span<double> y_next,
                                  std::span<double> err_estimate)>;

struct OdeProblem {
    int dimension = 0;
    RhsFn rhs;
    double t0 = 0.0;
    double t_end = 0.0;
    std::vector<double> y0;
    PostAcceptFn post_accept;  // may be empty
};

struct StepControl {
    double rtol = 1e-6;
    double atol = 1e-9;
    double safety = 0.9;
    double min_scale = 0.2;
    double max_scale = 5.0;
    std::optional<double> h_init;  // default: (t_end - t0) / 100
    long max_steps = 100000;       // cap on attempted (accepted + rejected) steps
};

struct SolutionSeries {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    long steps_taken = 0;
    long steps_rejected = 0;
};

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double t, double h)
        : std::runtime_error(what), t_(t), h_(h) {}
    double where() const { return t_; }
    double step_size() const { return h_; }

private:
    double t_;
    double h_;
};

void validate(const StepControl& control);
void validate(const OdeProblem& problem);

// One Dormand-Prince 5(4) step: y_next is the 5th-order advance,
// err_estimate the componentwise difference between the embedded 5th- and
// 4th-order solutions. Exactly 7 rhs evaluations per call.
// Throws IntegrationError if the rhs produces a non-finite value.
void dp45_step(const RhsFn& rhs, double t, std::span<const double> y, double h,
               std::span<double> y_next, std::span<double> err_estimate);

// One classical fourth-order Runge-Kutta step (no error estimate).
void rk4_step(const RhsFn& rhs, double t, std::span<const double> y, double h,
              std::span<double> y_next);

// Adaptive DP45 integration sampled at exactly `sample_times` (steps are
// clamped to land on each sample time; no interpolation). `sample_times`
// must be strictly increasing, start at t0 and end at t_end.
SolutionSeries integrate(const OdeProblem& problem, const StepControl& control,
                         std::span<const double> sample_times);

// Fixed-step classical RK4 with constant step h; the final substep before
// each sample time is clamped. Verification oracle, no error control.
SolutionSeries rk4_reference(const OdeProblem& problem, double h,
                             std::span<const double> sample_times);

// Fixed-step DP45 (error estimate ignored); used for convergence-order
// measurements. Accepts an alternate stepper for fault-injection checks.
SolutionSeries dp45_fixed(const OdeProblem& problem, double h,
                          std::span<const double> sample_times,
                          const StepFn& step = dp45_step);

}  // namespace viralsim::ode

#endif
