#include "viralsim/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>

namespace viralsim::campaign {

namespace {

std::string format_value(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void enforce_trajectory_invariants(const Trajectory& traj) {
    const double n = traj.scenario.pop.n;
    const double conservation_tol = 1e-6 * n;
    const double monotone_tol = 1e-9 * n;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double total = traj.s[k] + traj.i[k] + traj.r[k];
        if (std::fabs(total - n) > conservation_tol) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "conservation violated at t=%.6g: S+I+R=%.12g, N=%.12g",
                          traj.times[k], total, n);
            throw std::runtime_error(buf);
        }
        if (k > 0) {
            if (traj.s[k] > traj.s[k - 1] + monotone_tol)
                throw std::runtime_error("susceptible count increased at t=" +
                                         format_value(traj.times[k]));
            if (traj.r[k] < traj.r[k - 1] - monotone_tol)
                throw std::runtime_error("recovered count decreased at t=" +
                                         format_value(traj.times[k]));
        }
    }
}

}  // namespace

const char* to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::Beta: return "beta";
        case SweepParameter::Gamma: return "gamma";
        case SweepParameter::Seed: return "seed";
    }
    return "?";
}

void validate(const Scenario& scn) {
    sir::validate(scn.params);
    if (!(scn.pop.n > 0.0) || !std::isfinite(scn.pop.n))
        throw std::invalid_argument("scenario: population n must be positive");
    const auto check_component = [](double v, const char* name) {
        if (!std::isfinite(v) || v < -1e-9)
            throw std::invalid_argument(std::string("scenario: ") + name +
                                        " must be finite and >= 0");
    };
    check_component(scn.initial.s, "s0");
    check_component(scn.initial.i, "i0");
    check_component(scn.initial.r, "r0");
    const double total = scn.initial.s + scn.initial.i + scn.initial.r;
    if (std::fabs(total - scn.pop.n) > 1e-9 * scn.pop.n)
        throw std::invalid_argument(
            "scenario: initial compartments must sum to n");
    if (!(scn.t_end > 0.0) || !std::isfinite(scn.t_end))
        throw std::invalid_argument("scenario: t_end must be positive");
    if (scn.n_samples < 2)
        throw std::invalid_argument("scenario: n_samples must be >= 2");
}

std::vector<double> sample_grid(const Scenario& scn) {
    std::vector<double> times(static_cast<std::size_t>(scn.n_samples));
    const double denom = static_cast<double>(scn.n_samples - 1);
    for (std::size_t k = 0; k < times.size(); ++k)
        times[k] = scn.t_end * (static_cast<double>(k) / denom);
    return times;
}

Trajectory run_scenario(const Scenario& scn, const ode::StepControl& control) {
    validate(scn);
    const sir::ModelParams params = scn.params;
    const sir::Population pop = scn.pop;

    ode::OdeProblem problem;
    problem.dimension = 3;
    problem.t0 = 0.0;
    problem.t_end = scn.t_end;
    problem.y0 = {scn.initial.s, scn.initial.i, scn.initial.r};
    problem.rhs = [params, pop](double, std::span<const double> y,
                                std::span<double> dydt) {
        const sir::Derivatives d =
            sir::rhs({y[0], y[1], y[2]}, params, pop);
        dydt[0] = d.ds;
        dydt[1] = d.di;
        dydt[2] = d.dr;
    };
    // Tiny negative drift is clamped; anything worse is a real violation.
    problem.post_accept = [](double t, std::span<double> y) {
        for (double& v : y) {
            if (v < 0.0) {
                if (v < -1e-9)
                    throw ode::IntegrationError(
                        "compartment went negative at t=" + format_value(t), t,
                        0.0);
                v = 0.0;
            }
        }
    };

    Trajectory traj;
    traj.scenario = scn;
    try {
        const std::vector<double> grid = sample_grid(scn);
        const ode::SolutionSeries series =
            ode::integrate(problem, control, grid);
        traj.times = series.times;
        traj.s.reserve(series.states.size());
        traj.i.reserve(series.states.size());
        traj.r.reserve(series.states.size());
        for (const auto& y : series.states) {
            traj.s.push_back(y[0]);
            traj.i.push_back(y[1]);
            traj.r.push_back(y[2]);
        }
        traj.steps_taken = series.steps_taken;
        traj.steps_rejected = series.steps_rejected;
        enforce_trajectory_invariants(traj);
    } catch (const std::exception& e) {
        throw std::runtime_error("scenario '" + scn.label + "': " + e.what());
    }
    return traj;
}

CampaignMetrics metrics(const Trajectory& traj) {
    if (traj.times.empty() || traj.times.size() != traj.i.size())
        throw std::invalid_argument("metrics: malformed trajectory");
    const double n = traj.scenario.pop.n;

    CampaignMetrics m;
    std::size_t peak_idx = 0;
    for (std::size_t k = 1; k < traj.i.size(); ++k)
        if (traj.i[k] > traj.i[peak_idx]) peak_idx = k;
    m.peak_sharers = traj.i[peak_idx];
    m.t_peak = traj.times[peak_idx];
    m.cumulative_reach = traj.r.back();
    m.reach_fraction = m.cumulative_reach / n;

    for (std::size_t k = 0; k < traj.s.size(); ++k) {
        if (traj.s[k] < 0.01 * n) {
            m.depletion_time = traj.times[k];
            break;
        }
    }

    m.reproduction_number =
        sir::basic_reproduction_number(traj.scenario.params);
    m.classification = sir::classify_outbreak(traj.scenario.params);

    const sir::FinalSize fs =
        sir::final_size(traj.scenario.params, traj.scenario.initial.s,
                        traj.scenario.initial.i, traj.scenario.initial.r,
                        traj.scenario.pop);
    for (std::size_t k = 0; k < traj.r.size(); ++k) {
        if (traj.r[k] >= 0.5 * fs.r_inf) {
            m.half_reach_time = traj.times[k];
            break;
        }
    }
    return m;
}

void validate(const SweepSpec& spec) {
    validate(spec.base);
    if (spec.values.empty())
        throw std::invalid_argument("sweep: values must be nonempty");
    for (double v : spec.values) {
        if (!std::isfinite(v))
            throw std::invalid_argument("sweep: values must be finite");
        if (spec.parameter == SweepParameter::Seed &&
            (v < 0.0 || v > spec.base.pop.n))
            throw std::invalid_argument("sweep: seed values must be in [0, n]");
        if (spec.parameter != SweepParameter::Seed && v < 0.0)
            throw std::invalid_argument("sweep: rate values must be >= 0");
    }
}

Scenario scenario_for_value(const SweepSpec& spec, double value) {
    Scenario scn = spec.base;
    switch (spec.parameter) {
        case SweepParameter::Beta:
            scn.params.beta = value;
            break;
        case SweepParameter::Gamma:
            scn.params.gamma = value;
            break;
        case SweepParameter::Seed:
            scn.initial = {spec.base.pop.n - value, value, 0.0};
            break;
    }
    if (!scn.label.empty()) scn.label += " ";
    scn.label += std::string(to_string(spec.parameter)) + "=" +
                 format_value(value);
    return scn;
}

std::vector<SweepRun> sweep(const SweepSpec& spec,
                            const ode::StepControl& control,
                            ExecutionPolicy policy) {
    validate(spec);
    ode::validate(control);
    std::vector<SweepRun> runs(spec.values.size());
    const bool parallel = policy == ExecutionPolicy::Parallel;
    const auto count = static_cast<std::int64_t>(spec.values.size());

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::int64_t idx = 0; idx < count; ++idx) {
        SweepRun& run = runs[static_cast<std::size_t>(idx)];
        run.value = spec.values[static_cast<std::size_t>(idx)];
        try {
            Trajectory traj =
                run_scenario(scenario_for_value(spec, run.value), control);
            run.metrics = metrics(traj);
            run.trajectory = std::move(traj);
        } catch (const std::exception& e) {
            run.error = e.what();
        } catch (...) {
            run.error = "unknown failure";
        }
    }
    return runs;
}

std::vector<SeedEfficiencyRow> seed_efficiency(const SweepSpec& spec,
                                               const ode::StepControl& control,
                                               ExecutionPolicy policy) {
    if (spec.parameter != SweepParameter::Seed)
        throw std::invalid_argument("seed_efficiency: needs a seed sweep");
    if (spec.values.size() < 2)
        throw std::invalid_argument("seed_efficiency: needs >= 2 seed values");

    const std::vector<SweepRun> runs = sweep(spec, control, policy);
    struct Entry {
        double seed;
        double reach;
        double reach_fraction;
        double t_peak;
    };
    std::vector<Entry> ok;
    for (const SweepRun& run : runs)
        if (run.ok())
            ok.push_back({run.value, run.metrics->cumulative_reach,
                          run.metrics->reach_fraction, run.metrics->t_peak});
    if (ok.size() < 2)
        throw std::runtime_error(
            "seed_efficiency: fewer than 2 seed runs succeeded");
    std::sort(ok.begin(), ok.end(),
              [](const Entry& a, const Entry& b) { return a.seed < b.seed; });

    std::vector<SeedEfficiencyRow> table;
    table.reserve(ok.size());
    for (std::size_t k = 0; k < ok.size(); ++k) {
        SeedEfficiencyRow row;
        row.seed = ok[k].seed;
        row.reach_fraction = ok[k].reach_fraction;
        row.t_peak = ok[k].t_peak;
        if (k > 0) {
            const double dseed = ok[k].seed - ok[k - 1].seed;
            if (dseed > 0.0)
                row.marginal_reach_per_seed =
                    (ok[k].reach - ok[k - 1].reach) / dseed;
        }
        table.push_back(row);
    }
    return table;
}

std::vector<SweepSpec> figure_presets() {
    Scenario base;
    base.params = {0.25, 0.1};
    base.initial = {900.0, 100.0, 0.0};
    base.pop = {1000.0};
    base.t_end = 100.0;
    base.n_samples = 1001;

    SweepSpec beta_sweep{base, SweepParameter::Beta, {0.1, 0.25, 0.5, 0.7}};
    beta_sweep.base.label = "fig2";
    SweepSpec gamma_sweep{base, SweepParameter::Gamma, {0.01, 0.1, 0.2, 0.5}};
    gamma_sweep.base.label = "fig3";
    SweepSpec seed_sweep{base, SweepParameter::Seed, {1.0, 10.0, 100.0, 200.0}};
    seed_sweep.base.label = "fig4";
    return {beta_sweep, gamma_sweep, seed_sweep};
}

}  // namespace viralsim::campaign
