// viralsim: simulate SIR message diffusion, sweep campaign parameters,
// render the standard figure set, and run the built-in property checks.
//
// Exit codes: 0 success, 1 runtime failure (integration, file IO),
// 2 invalid flags or configuration.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "viralsim/campaign.hpp"
#include "viralsim/config.hpp"
#include "viralsim/csv.hpp"
#include "viralsim/selfcheck.hpp"
#include "viralsim/sir.hpp"
#include "viralsim/svg.hpp"

namespace {

namespace vs = viralsim;
namespace fs = std::filesystem;

std::string fmt6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return text;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string metrics_line(const vs::campaign::CampaignMetrics& m) {
    std::string line = "R0=" + fmt6(m.reproduction_number);
    line += " classification=";
    line += vs::sir::to_string(m.classification);
    line += " peak_sharers=" + fmt6(m.peak_sharers);
    line += " t_peak=" + fmt6(m.t_peak);
    line += " cumulative_reach=" + fmt6(m.cumulative_reach);
    line += " reach_fraction=" + fmt6(m.reach_fraction);
    return line;
}

std::vector<vs::io::Series> trajectory_series(
    const vs::campaign::Trajectory& traj) {
    return {{"S (not yet reached)", traj.times, traj.s},
            {"I (sharing)", traj.times, traj.i},
            {"R (stopped sharing)", traj.times, traj.r}};
}

std::string chart_title(const vs::campaign::Scenario& scn) {
    std::string title = scn.label;
    if (!title.empty()) title += ": ";
    title += "beta=" + fmt6(scn.params.beta) +
             ", gamma=" + fmt6(scn.params.gamma) +
             ", I(0)=" + fmt6(scn.initial.i) + ", N=" + fmt6(scn.pop.n) +
             " (t = 0.." + fmt6(scn.t_end) + ")";
    return title;
}

// Collected simulate/sweep flags; all optional so config-file values show
// through, validated via the shared finalize_config path.
struct Flags {
    std::optional<std::string> config_path;
    std::optional<double> beta, gamma, s0, i0, r0, t_end;
    std::optional<int> samples;
    std::optional<std::string> out_csv, out_svg;
};

void add_model_flags(CLI::App* cmd, Flags& flags) {
    cmd->add_option("--config", flags.config_path, "config file path");
    cmd->add_option("--beta", flags.beta, "infectivity per unit time");
    cmd->add_option("--gamma", flags.gamma, "recovery rate per unit time");
    cmd->add_option("--s0", flags.s0, "initial susceptible count");
    cmd->add_option("--i0", flags.i0, "initial sharer count");
    cmd->add_option("--r0", flags.r0, "initial recovered count");
    cmd->add_option("--t-end", flags.t_end, "time horizon (dimensionless)");
    cmd->add_option("--samples", flags.samples, "number of sample points");
    cmd->add_option("--out-csv", flags.out_csv, "trajectory CSV output path");
    cmd->add_option("--out-svg", flags.out_svg, "chart SVG output path");
}

vs::io::RunConfig merge_config(const Flags& flags) {
    vs::io::RawConfig raw;
    if (flags.config_path)
        raw = vs::io::parse_config_raw(read_file(*flags.config_path));
    if (flags.beta) raw.beta = flags.beta;
    if (flags.gamma) raw.gamma = flags.gamma;
    if (flags.s0) raw.s0 = flags.s0;
    if (flags.i0) raw.i0 = flags.i0;
    if (flags.r0) raw.r0 = flags.r0;
    if (flags.t_end) raw.t_end = flags.t_end;
    if (flags.samples) raw.n_samples = flags.samples;
    if (flags.out_csv) raw.out_csv = flags.out_csv;
    if (flags.out_svg) raw.out_svg = flags.out_svg;
    return vs::io::finalize_config(raw);
}

int cmd_simulate(const Flags& flags) {
    vs::io::RunConfig cfg;
    try {
        cfg = merge_config(flags);
        if (!cfg.out_csv)
            throw vs::io::ConfigError("missing required keys: out_csv", 0,
                                      "out_csv");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n"
                  << "run 'viralsim simulate --help' for usage\n";
        return 2;
    }

    try {
        const vs::campaign::Scenario scn =
            vs::io::to_scenario(cfg, "simulate");
        const vs::campaign::Trajectory traj =
            vs::campaign::run_scenario(scn, {});
        const vs::campaign::CampaignMetrics m = vs::campaign::metrics(traj);
        write_file(*cfg.out_csv, vs::io::write_csv(traj));
        if (cfg.out_svg)
            write_file(*cfg.out_svg,
                       vs::io::write_svg_chart(trajectory_series(traj),
                                               chart_title(scn)));
        std::cout << metrics_line(m) << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

// "name.csv" -> "name_beta_0.25.csv"
std::string suffixed_path(const std::string& base, const std::string& param,
                          double value) {
    const fs::path p(base);
    fs::path out = p.parent_path();
    out /= p.stem().string() + "_" + param + "_" + fmt6(value) +
           p.extension().string();
    return out.string();
}

int cmd_sweep(const Flags& flags) {
    vs::io::RunConfig cfg;
    vs::campaign::SweepSpec spec;
    try {
        cfg = merge_config(flags);
        spec = vs::io::to_sweep_spec(cfg, "sweep");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n"
                  << "run 'viralsim sweep --help' for usage\n";
        return 2;
    }

    try {
        const std::string param = vs::campaign::to_string(spec.parameter);
        const std::vector<vs::campaign::SweepRun> runs =
            vs::campaign::sweep(spec, {});
        bool any_failed = false;
        for (const vs::campaign::SweepRun& run : runs) {
            if (!run.ok()) {
                any_failed = true;
                std::cout << param << "=" << fmt6(run.value)
                          << " ERROR " << run.error << "\n";
                continue;
            }
            std::cout << param << "=" << fmt6(run.value) << " "
                      << metrics_line(*run.metrics) << "\n";
            if (cfg.out_csv)
                write_file(suffixed_path(*cfg.out_csv, param, run.value),
                           vs::io::write_csv(*run.trajectory));
            if (cfg.out_svg)
                write_file(suffixed_path(*cfg.out_svg, param, run.value),
                           vs::io::write_svg_chart(
                               trajectory_series(*run.trajectory),
                               chart_title(run.trajectory->scenario)));
        }
        if (spec.parameter == vs::campaign::SweepParameter::Seed) {
            std::cout << "seed efficiency:\n";
            for (const vs::campaign::SeedEfficiencyRow& row :
                 vs::campaign::seed_efficiency(spec, {})) {
                std::cout << "seed=" << fmt6(row.seed)
                          << " reach_fraction=" << fmt6(row.reach_fraction)
                          << " t_peak=" << fmt6(row.t_peak)
                          << " marginal_reach_per_seed="
                          << (row.marginal_reach_per_seed
                                  ? fmt6(*row.marginal_reach_per_seed)
                                  : std::string("-"))
                          << "\n";
            }
        }
        return any_failed ? 1 : 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_figures(const std::string& out_dir) {
    try {
        fs::create_directories(out_dir);
        const std::vector<vs::campaign::SweepSpec> presets =
            vs::campaign::figure_presets();
        static const char* const stems[] = {"fig2", "fig3", "fig4"};
        for (std::size_t p = 0; p < presets.size(); ++p) {
            const std::vector<vs::campaign::SweepRun> runs =
                vs::campaign::sweep(presets[p], {});
            for (std::size_t v = 0; v < runs.size(); ++v) {
                if (!runs[v].ok())
                    throw std::runtime_error(runs[v].error);
                const std::string stem =
                    std::string(stems[p]) + static_cast<char>('a' + v);
                const vs::campaign::Trajectory& traj = *runs[v].trajectory;
                write_file((fs::path(out_dir) / (stem + ".csv")).string(),
                           vs::io::write_csv(traj));
                write_file((fs::path(out_dir) / (stem + ".svg")).string(),
                           vs::io::write_svg_chart(
                               trajectory_series(traj),
                               stem + ": " + chart_title(traj.scenario)));
                std::cout << stem << " "
                          << metrics_line(*runs[v].metrics) << "\n";
            }
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_check(bool verbose) {
    const std::vector<vs::check::CheckResult> results =
        vs::check::run_self_checks();
    for (const vs::check::CheckResult& res : results) {
        std::cout << (res.passed ? "ok   " : "FAIL ") << res.name << " — "
                  << res.summary << "\n";
        if (verbose)
            for (const std::string& line : res.details)
                std::cout << "     " << line << "\n";
    }
    if (vs::check::all_passed(results)) {
        std::cout << "all checks passed\n";
        return 0;
    }
    std::cout << "some checks FAILED\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SIR simulator for message diffusion campaigns"};
    app.require_subcommand(1);

    Flags sim_flags;
    CLI::App* simulate =
        app.add_subcommand("simulate", "run one scenario, write CSV/SVG");
    add_model_flags(simulate, sim_flags);

    Flags sweep_flags;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "run a beta/gamma/seed sweep from a config file");
    add_model_flags(sweep, sweep_flags);

    std::string figures_dir;
    CLI::App* figures = app.add_subcommand(
        "figures", "render the standard figure set (CSV + SVG per panel)");
    figures->add_option("out_dir", figures_dir, "output directory")
        ->required();

    bool verbose = false;
    CLI::App* check =
        app.add_subcommand("check", "run the built-in property checks");
    check->add_flag("-v,--verbose", verbose, "print per-scenario residuals");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help() << "\n";
        return 2;
    }

    if (simulate->parsed()) return cmd_simulate(sim_flags);
    if (sweep->parsed()) return cmd_sweep(sweep_flags);
    if (figures->parsed()) return cmd_figures(figures_dir);
    return cmd_check(verbose);
}
