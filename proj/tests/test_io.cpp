#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>

#include "viralsim/campaign.hpp"
#include "viralsim/config.hpp"
#include "viralsim/csv.hpp"
#include "viralsim/svg.hpp"
#include "xml_check.hpp"

using namespace viralsim;

namespace {

const char* kBaselineConfig =
    "beta = 0.25\ngamma = 0.1\ns0 = 900\ni0 = 100\nr0 = 0\n";

// Canonical emitter used for the parse/emit idempotence property.
std::string emit_config(const io::RunConfig& cfg) {
    const auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::string text;
    text += "beta = " + num(cfg.beta) + "\n";
    text += "gamma = " + num(cfg.gamma) + "\n";
    text += "s0 = " + num(cfg.s0) + "\n";
    text += "i0 = " + num(cfg.i0) + "\n";
    text += "r0 = " + num(cfg.r0) + "\n";
    text += "t_end = " + num(cfg.t_end) + "\n";
    text += "n_samples = " + std::to_string(cfg.n_samples) + "\n";
    if (cfg.sweep) {
        text += "sweep_param = " + cfg.sweep->parameter + "\n";
        text += "sweep_values = ";
        for (std::size_t k = 0; k < cfg.sweep->values.size(); ++k) {
            if (k) text += ",";
            text += num(cfg.sweep->values[k]);
        }
        text += "\n";
    }
    if (cfg.out_csv) text += "out_csv = " + *cfg.out_csv + "\n";
    if (cfg.out_svg) text += "out_svg = " + *cfg.out_svg + "\n";
    return text;
}

campaign::Trajectory tiny_trajectory() {
    campaign::Scenario scn;
    scn.params = {0.25, 0.1};
    scn.initial = {900.0, 100.0, 0.0};
    scn.pop = {1000.0};
    scn.t_end = 1.0;
    scn.n_samples = 11;
    scn.label = "tiny";
    return campaign::run_scenario(scn, {});
}

}  // namespace

TEST_CASE("parse_config: baseline text") {
    const io::RunConfig cfg = io::parse_config(kBaselineConfig);
    CHECK(cfg.beta == 0.25);
    CHECK(cfg.gamma == 0.1);
    CHECK(cfg.s0 == 900.0);
    CHECK(cfg.i0 == 100.0);
    CHECK(cfg.r0 == 0.0);
    CHECK(cfg.t_end == 100.0);     // default
    CHECK(cfg.n_samples == 1001);  // default
    CHECK_FALSE(cfg.sweep.has_value());
    CHECK_FALSE(cfg.out_csv.has_value());
}

TEST_CASE("parse_config: empty input lists the required keys") {
    try {
        io::parse_config("");
        FAIL("expected ConfigError");
    } catch (const io::ConfigError& e) {
        const std::string msg = e.what();
        for (const char* key : {"beta", "gamma", "s0", "i0", "r0"})
            CHECK(msg.find(key) != std::string::npos);
    }
}

TEST_CASE("parse_config: invariant violations name the key") {
    try {
        io::parse_config("beta = -1\ngamma = 0.1\ns0 = 900\ni0 = 100\nr0 = 0");
        FAIL("expected ConfigError");
    } catch (const io::ConfigError& e) {
        CHECK(e.key() == "beta");
        CHECK(e.line() == 1);
        CHECK(std::string(e.what()).find("beta") != std::string::npos);
    }
}

TEST_CASE("parse_config: unknown key is rejected with its line") {
    try {
        io::parse_config("beta = 0.25\nshare_rate = 2\n");
        FAIL("expected ConfigError");
    } catch (const io::ConfigError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("share_rate") != std::string::npos);
    }
}

TEST_CASE("parse_config: unparsable values name line and key") {
    try {
        io::parse_config("beta = fast\n");
        FAIL("expected ConfigError");
    } catch (const io::ConfigError& e) {
        CHECK(e.line() == 1);
        CHECK(e.key() == "beta");
    }
    CHECK_THROWS_AS(io::parse_config("n_samples = 2.5\n" +
                                     std::string(kBaselineConfig)),
                    io::ConfigError);
}

TEST_CASE("parse_config: duplicate keys are rejected") {
    CHECK_THROWS_AS(
        io::parse_config(std::string(kBaselineConfig) + "beta = 0.3\n"),
        io::ConfigError);
}

TEST_CASE("parse_config: comments and spacing are tolerated") {
    const io::RunConfig cfg = io::parse_config(
        "# campaign setup\n"
        "  beta   =  0.25   # infectivity\n"
        "\tgamma=0.1\n"
        "\n"
        "s0 = 900\ni0 = 100\nr0 = 0\n"
        "t_end = 60\n"
        "n_samples = 601\n");
    CHECK(cfg.beta == 0.25);
    CHECK(cfg.gamma == 0.1);
    CHECK(cfg.t_end == 60.0);
    CHECK(cfg.n_samples == 601);
}

TEST_CASE("parse_config: sweep keys") {
    const io::RunConfig cfg = io::parse_config(
        std::string(kBaselineConfig) +
        "sweep_param = beta\nsweep_values = 0.1,0.25,0.5,0.7\n");
    REQUIRE(cfg.sweep.has_value());
    CHECK(cfg.sweep->parameter == "beta");
    CHECK(cfg.sweep->values == std::vector<double>{0.1, 0.25, 0.5, 0.7});

    CHECK_THROWS_AS(io::parse_config(std::string(kBaselineConfig) +
                                     "sweep_param = beta\n"),
                    io::ConfigError);
    CHECK_THROWS_AS(io::parse_config(std::string(kBaselineConfig) +
                                     "sweep_param = delta\n"
                                     "sweep_values = 1,2\n"),
                    io::ConfigError);
    CHECK_THROWS_AS(io::parse_config(std::string(kBaselineConfig) +
                                     "sweep_param = seed\n"
                                     "sweep_values = 1200\n"),
                    io::ConfigError);
}

TEST_CASE("parse_config: emit/parse idempotence") {
    io::RunConfig cfg = io::parse_config(
        std::string(kBaselineConfig) +
        "t_end = 80\nn_samples = 401\n"
        "sweep_param = seed\nsweep_values = 1,10,100\n"
        "out_csv = runs.csv\nout_svg = runs.svg\n");
    const io::RunConfig again = io::parse_config(emit_config(cfg));
    CHECK(again.beta == cfg.beta);
    CHECK(again.gamma == cfg.gamma);
    CHECK(again.s0 == cfg.s0);
    CHECK(again.i0 == cfg.i0);
    CHECK(again.r0 == cfg.r0);
    CHECK(again.t_end == cfg.t_end);
    CHECK(again.n_samples == cfg.n_samples);
    REQUIRE(again.sweep.has_value());
    CHECK(again.sweep->parameter == cfg.sweep->parameter);
    CHECK(again.sweep->values == cfg.sweep->values);
    CHECK(again.out_csv == cfg.out_csv);
    CHECK(again.out_svg == cfg.out_svg);
}

TEST_CASE("to_scenario and to_sweep_spec") {
    const io::RunConfig cfg = io::parse_config(
        std::string(kBaselineConfig) +
        "sweep_param = gamma\nsweep_values = 0.01,0.1\n");
    const campaign::Scenario scn = io::to_scenario(cfg, "run");
    CHECK(scn.pop.n == 1000.0);
    CHECK(scn.label == "run");

    const campaign::SweepSpec spec = io::to_sweep_spec(cfg, "sweepy");
    CHECK(spec.parameter == campaign::SweepParameter::Gamma);
    CHECK(spec.values == std::vector<double>{0.01, 0.1});

    const io::RunConfig no_sweep = io::parse_config(kBaselineConfig);
    CHECK_THROWS_AS(io::to_sweep_spec(no_sweep, "x"), io::ConfigError);
}

TEST_CASE("write_csv: structure and first row") {
    const campaign::Trajectory traj = tiny_trajectory();
    const std::string text = io::write_csv(traj);

    CHECK(text.rfind("t,S,I,R\n", 0) == 0);
    CHECK(text.substr(8, 14) == "0,900,100,0\n0.");
    CHECK(text.find('\r') == std::string::npos);

    std::size_t lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    CHECK(lines == traj.times.size() + 1);
}

TEST_CASE("write_csv: constant trajectory rows") {
    campaign::Scenario scn;
    scn.params = {0.25, 0.1};
    scn.initial = {1000.0, 0.0, 0.0};
    scn.pop = {1000.0};
    scn.t_end = 1.0;
    scn.n_samples = 3;
    scn.label = "flat";
    const std::string text =
        io::write_csv(campaign::run_scenario(scn, {}));
    CHECK(text == "t,S,I,R\n0,1000,0,0\n0.5,1000,0,0\n1,1000,0,0\n");
}

TEST_CASE("csv round trip is bit-exact") {
    const campaign::Trajectory traj = tiny_trajectory();
    const std::string text = io::write_csv(traj);
    const io::CsvData data = io::read_csv(text);
    REQUIRE(data.t.size() == traj.times.size());
    CHECK(data.t == traj.times);
    CHECK(data.s == traj.s);
    CHECK(data.i == traj.i);
    CHECK(data.r == traj.r);
    // And serialization itself is deterministic.
    CHECK(io::write_csv(traj) == text);
}

TEST_CASE("read_csv: malformed input") {
    CHECK_THROWS(io::read_csv(""));
    CHECK_THROWS(io::read_csv("time,S,I,R\n0,1,2,3\n"));
    CHECK_THROWS(io::read_csv("t,S,I,R\n0,1,2\n"));
    CHECK_THROWS(io::read_csv("t,S,I,R\n0,1,2,3,4\n"));
    CHECK_THROWS(io::read_csv("t,S,I,R\n0,one,2,3\n"));
    CHECK_THROWS(io::read_csv("t,S,I,R\n0,1,2,3"));  // no trailing newline
}

TEST_CASE("svg chart: three series, legend, well-formedness") {
    const campaign::Trajectory traj = tiny_trajectory();
    const std::vector<io::Series> series = {
        {"S", traj.times, traj.s},
        {"I", traj.times, traj.i},
        {"R", traj.times, traj.r},
    };
    const std::string svg = io::write_svg_chart(series, "tiny run");

    std::size_t polylines = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++polylines;
        pos += 9;
    }
    CHECK(polylines == 3);
    CHECK(svg.find(">S</text>") != std::string::npos);
    CHECK(svg.find(">I</text>") != std::string::npos);
    CHECK(svg.find(">R</text>") != std::string::npos);
    CHECK(svg.find("tiny run") != std::string::npos);

    const xml_check::Result parsed = xml_check::check(svg);
    INFO(parsed.error);
    CHECK(parsed.ok);
    for (const std::string& name : parsed.element_names) {
        const bool allowed = name == "svg" || name == "g" ||
                             name == "polyline" || name == "line" ||
                             name == "text" || name == "rect";
        INFO("element: " << name);
        CHECK(allowed);
    }

    // Deterministic bytes.
    CHECK(io::write_svg_chart(series, "tiny run") == svg);
}

TEST_CASE("svg chart: single constant series sits on the padded midline") {
    const std::vector<io::Series> series = {
        {"flat", {0.0, 1.0, 2.0}, {7.0, 7.0, 7.0}}};
    const std::string svg = io::write_svg_chart(series, "flat");
    // With a degenerate y-extent padded 5% both ways, the line lands exactly
    // mid-plot: 44 + 404/2 = 246.
    std::size_t polylines = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++polylines;
        pos += 9;
    }
    CHECK(polylines == 1);
    CHECK(svg.find(",246.00 ") != std::string::npos);
    CHECK(xml_check::check(svg).ok);
}

TEST_CASE("svg chart: input validation") {
    CHECK_THROWS_AS(io::write_svg_chart({}, "empty"), std::invalid_argument);
    CHECK_THROWS_AS(
        io::write_svg_chart({{"a", {0.0, 1.0}, {0.0, 1.0}},
                             {"b", {0.0, 2.0}, {0.0, 1.0}}},
                            "mismatch"),
        std::invalid_argument);
    CHECK_THROWS_AS(
        io::write_svg_chart({{"a", {0.0, 1.0}, {0.0, std::nan("")}}}, "nan"),
        std::invalid_argument);
    CHECK_THROWS_AS(io::write_svg_chart({{"a", {0.0, 1.0}, {0.0}}}, "short"),
                    std::invalid_argument);
}

TEST_CASE("svg chart: labels are escaped") {
    const std::vector<io::Series> series = {
        {"a<b&c", {0.0, 1.0}, {1.0, 2.0}}};
    const std::string svg = io::write_svg_chart(series, "x \"quoted\" <tag>");
    CHECK(svg.find("a&lt;b&amp;c") != std::string::npos);
    CHECK(svg.find("&quot;quoted&quot;") != std::string::npos);
    CHECK(xml_check::check(svg).ok);
}
