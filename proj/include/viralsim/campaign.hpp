// Scenario construction, sweep experiments over beta / gamma / seed size,
// and extraction of marketing metrics from simulated trajectories.
#ifndef VIRALSIM_CAMPAIGN_HPP
#define VIRALSIM_CAMPAIGN_HPP

#include <optional>
#include <string>
#include <vector>

#include "viralsim/ode.hpp"
#include "viralsim/sir.hpp"

namespace viralsim::campaign {

struct Scenario {
    sir::ModelParams params;
    sir::CompartmentState initial;
    sir::Population pop;
    double t_end = 100.0;
    int n_samples = 1001;  // uniform grid including both endpoints
    std::string label;
};

void validate(const Scenario& scn);

// Uniform sampling grid 0..t_end with n_samples points.
std::vector<double> sample_grid(const Scenario& scn);

struct Trajectory {
    Scenario scenario;
    std::vector<double> times;
    std::vector<double> s, i, r;
    long steps_taken = 0;
    long steps_rejected = 0;
};

struct CampaignMetrics {
    double peak_sharers = 0.0;      // max of I over the sample grid
    double t_peak = 0.0;            // time of that max (ties: earliest)
    double cumulative_reach = 0.0;  // R(t_end)
    double reach_fraction = 0.0;    // R(t_end)/n
    std::optional<double> depletion_time;   // first sample with S < 1% of n
    std::optional<double> half_reach_time;  // first sample with R >= r_inf/2
    double reproduction_number = 0.0;
    sir::OutbreakClass classification = sir::OutbreakClass::Subcritical;
};

enum class SweepParameter { Beta, Gamma, Seed };

const char* to_string(SweepParameter p);

struct SweepSpec {
    Scenario base;
    SweepParameter parameter = SweepParameter::Beta;
    // For Seed, a value v means I(0)=v, S(0)=n-v, R(0)=0.
    std::vector<double> values;
};

void validate(const SweepSpec& spec);

// The scenario obtained by applying one sweep value to the base.
Scenario scenario_for_value(const SweepSpec& spec, double value);

// Integrates the scenario on its uniform grid and checks the conservation
// and monotonicity invariants; failures carry the scenario label.
Trajectory run_scenario(const Scenario& scn, const ode::StepControl& control);

CampaignMetrics metrics(const Trajectory& traj);

struct SweepRun {
    double value = 0.0;
    std::optional<Trajectory> trajectory;
    std::optional<CampaignMetrics> metrics;
    std::string error;  // non-empty when the run failed
    bool ok() const { return error.empty(); }
};

enum class ExecutionPolicy { Serial, Parallel };

// One independent run per value, results in value order. Parallel execution
// uses OpenMP; Serial is the reference path and produces identical results.
// Per-value failures land in SweepRun::error without aborting the rest.
std::vector<SweepRun> sweep(const SweepSpec& spec,
                            const ode::StepControl& control,
                            ExecutionPolicy policy = ExecutionPolicy::Parallel);

struct SeedEfficiencyRow {
    double seed = 0.0;
    double reach_fraction = 0.0;
    double t_peak = 0.0;
    // Delta cumulative_reach / delta seed vs the previous row; absent on the
    // first row (and for duplicate seed values).
    std::optional<double> marginal_reach_per_seed;
};

// Comparison table for a seed sweep, sorted by seed value.
std::vector<SeedEfficiencyRow> seed_efficiency(
    const SweepSpec& spec, const ode::StepControl& control,
    ExecutionPolicy policy = ExecutionPolicy::Parallel);

// The three standard sweep experiments: infectivity (beta in
// {0.1,0.25,0.5,0.7}, gamma=0.1), recovery rate (gamma in
// {0.01,0.1,0.2,0.5}, beta=0.25), and seed size (I(0) in {1,10,100,200},
// beta=0.25, gamma=0.1). All use N=1000, t_end=100, 1001 samples.
std::vector<SweepSpec> figure_presets();

}  // namespace viralsim::campaign

#endif
