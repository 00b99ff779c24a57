// SIR dynamics of message diffusion: the vector field, reproduction-number
// threshold analysis, equilibrium residuals, and the closed-form analytics
// (conserved quantity, final size, peak height) used as simulation oracles.
#ifndef VIRALSIM_SIR_HPP
#define VIRALSIM_SIR_HPP

namespace viralsim::sir {

struct ModelParams {
    double beta = 0.0;   // infectivity per unit (dimensionless) time
    double gamma = 0.0;  // recovery rate: sharers stop sharing at this rate
};

// beta = delta * tau: contact rate times per-contact transmission probability.
struct InfectivityFactors {
    double delta = 0.0;  // contacts per individual per unit time
    double tau = 0.0;    // transmission probability per contact, in [0,1]
};

struct CompartmentState {
    double s = 0.0;  // susceptible: audience not yet reached
    double i = 0.0;  // infected: actively sharing
    double r = 0.0;  // recovered: stopped sharing
};

struct Population {
    double n = 0.0;  // total audience size, s+i+r must equal n
};

struct Derivatives {
    double ds = 0.0;
    double di = 0.0;
    double dr = 0.0;
};

enum class OutbreakClass { Subcritical, Critical, Supercritical };

const char* to_string(OutbreakClass c);

void validate(const ModelParams& params);
void validate(const InfectivityFactors& factors);

// dS = -beta*S*I/N, dI = beta*S*I/N - gamma*I, dR = gamma*I.
Derivatives rhs(const CompartmentState& state, const ModelParams& params,
                const Population& pop);

double compose_infectivity(const InfectivityFactors& factors);

// R0 = beta/gamma; requires gamma > 0 (1/gamma is the mean sharing period).
double basic_reproduction_number(const ModelParams& params);

// Subcritical: R0 < 1 (message fizzles). Supercritical: R0 > 1 (goes viral).
// Critical: |R0 - 1| <= 1e-12.
OutbreakClass classify_outbreak(const ModelParams& params);

// Max-norm of the vector field; zero exactly at the rest states.
double equilibrium_residual(const CompartmentState& state,
                            const ModelParams& params, const Population& pop);

bool is_equilibrium(const CompartmentState& state, const ModelParams& params,
                    const Population& pop);

// V = I + S - (N/R0) ln S, constant along any exact trajectory with S > 0.
double trajectory_invariant(const CompartmentState& state,
                            const ModelParams& params, const Population& pop);

struct FinalSize {
    double s_inf = 0.0;  // audience never reached
    double r_inf = 0.0;  // total reach, n - s_inf
};

// Long-run outcome: the unique fixed point of x = s0*exp(-R0*(n-x-r0)/n)
// on [0, s0], found by bisection to absolute tolerance 1e-9*n.
FinalSize final_size(const ModelParams& params, double s0, double i0,
                     double r0, const Population& pop);

struct AnalyticPeak {
    double s_at_peak = 0.0;
    double i_peak = 0.0;
};

// Peak sharers: dI/dt = 0 at S* = N/R0; the height follows from the
// trajectory invariant. If the start is already past threshold
// (R0*s0/n <= 1) the peak is the initial state.
AnalyticPeak peak_infected_analytic(const ModelParams& params, double s0,
                                    double i0, const Population& pop);

}  // namespace viralsim::sir

#endif
