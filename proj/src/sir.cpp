#include "viralsim/sir.hpp"

#include <cmath>
#include <stdexcept>

namespace viralsim::sir {

namespace {

void require_population(const Population& pop) {
    if (!(pop.n > 0.0) || !std::isfinite(pop.n))
        throw std::domain_error("population size n must be positive");
}

void require_gamma(const ModelParams& params) {
    if (params.gamma == 0.0)
        throw std::domain_error(
            "R0 is undefined for gamma = 0 (infinite sharing period)");
}

}  // namespace

const char* to_string(OutbreakClass c) {
    switch (c) {
        case OutbreakClass::Subcritical: return "Subcritical";
        case OutbreakClass::Critical: return "Critical";
        case OutbreakClass::Supercritical: return "Supercritical";
    }
    return "?";
}

void validate(const ModelParams& p) {
    if (!(p.beta >= 0.0) || !std::isfinite(p.beta))
        throw std::invalid_argument("beta must be finite and >= 0");
    if (!(p.gamma >= 0.0) || !std::isfinite(p.gamma))
        throw std::invalid_argument("gamma must be finite and >= 0");
}

void validate(const InfectivityFactors& f) {
    if (!(f.delta >= 0.0) || !std::isfinite(f.delta))
        throw std::invalid_argument("delta must be finite and >= 0");
    if (!(f.tau >= 0.0 && f.tau <= 1.0))
        throw std::invalid_argument("tau must be in [0, 1]");
}

Derivatives rhs(const CompartmentState& state, const ModelParams& params,
                const Population& pop) {
    require_population(pop);
    const double transmission = params.beta * state.s * state.i / pop.n;
    const double recovery = params.gamma * state.i;
    return {-transmission, transmission - recovery, recovery};
}

double compose_infectivity(const InfectivityFactors& factors) {
    validate(factors);
    return factors.delta * factors.tau;
}

double basic_reproduction_number(const ModelParams& params) {
    require_gamma(params);
    return params.beta / params.gamma;
}

OutbreakClass classify_outbreak(const ModelParams& params) {
    const double r0 = basic_reproduction_number(params);
    if (std::fabs(r0 - 1.0) <= 1e-12) return OutbreakClass::Critical;
    return r0 < 1.0 ? OutbreakClass::Subcritical : OutbreakClass::Supercritical;
}

double equilibrium_residual(const CompartmentState& state,
                            const ModelParams& params, const Population& pop) {
    const Derivatives d = rhs(state, params, pop);
    return std::max({std::fabs(d.ds), std::fabs(d.di), std::fabs(d.dr)});
}

bool is_equilibrium(const CompartmentState& state, const ModelParams& params,
                    const Population& pop) {
    return equilibrium_residual(state, params, pop) <=
           1e-12 * std::max(1.0, pop.n);
}

double trajectory_invariant(const CompartmentState& state,
                            const ModelParams& params, const Population& pop) {
    require_population(pop);
    if (!(state.s > 0.0))
        throw std::domain_error("trajectory invariant requires s > 0");
    if (params.beta == 0.0 || params.gamma == 0.0)
        throw std::domain_error(
            "trajectory invariant requires beta > 0 and gamma > 0");
    const double r0 = params.beta / params.gamma;
    return state.i + state.s - (pop.n / r0) * std::log(state.s);
}

FinalSize final_size(const ModelParams& params, double s0, double i0,
                     double r0, const Population& pop) {
    require_population(pop);
    require_gamma(params);
    const double n = pop.n;
    if (std::fabs(s0 + i0 + r0 - n) > 1e-6 * n)
        throw std::invalid_argument("final_size: s0+i0+r0 must equal n");
    if (s0 < 0.0 || i0 < 0.0 || r0 < 0.0)
        throw std::invalid_argument("final_size: compartments must be >= 0");
    if (i0 == 0.0) return {s0, r0};
    if (params.beta == 0.0) return {s0, n - s0};  // fixed point is s0 exactly

    const double ratio = params.beta / params.gamma;
    // g(x) = x - s0*exp(-R0*(n-x-r0)/n): g(0) <= 0, g(s0) > 0 for i0 > 0,
    // and the map is convex, so there is exactly one root in [0, s0].
    const auto g = [&](double x) {
        return x - s0 * std::exp(-ratio * (n - x - r0) / n);
    };
    double lo = 0.0, hi = s0;
    const double tol = 1e-9 * n;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    const double s_inf = 0.5 * (lo + hi);
    return {s_inf, n - s_inf};
}

AnalyticPeak peak_infected_analytic(const ModelParams& params, double s0,
                                    double i0, const Population& pop) {
    require_population(pop);
    if (params.beta == 0.0 || params.gamma == 0.0)
        throw std::domain_error(
            "analytic peak requires beta > 0 and gamma > 0");
    if (!(s0 > 0.0))
        throw std::domain_error("analytic peak requires s0 > 0");
    if (i0 == 0.0) return {s0, 0.0};  // disease-free trajectory: nothing moves

    const double r0 = params.beta / params.gamma;
    if (r0 * s0 / pop.n <= 1.0) return {s0, i0};  // already past threshold
    const double s_star = pop.n / r0;
    const double i_peak =
        i0 + s0 - s_star + (pop.n / r0) * std::log(s_star / s0);
    return {s_star, i_peak};
}

}  // namespace viralsim::sir
