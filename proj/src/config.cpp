#include "viralsim/config.hpp"

#include <charconv>
#include <cmath>
#include <set>

namespace viralsim::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view text, int line, const std::string& key) {
    const std::string_view t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                              "': unparsable number '" + std::string(t) + "'",
                          line, key);
    return value;
}

int parse_integer(std::string_view text, int line, const std::string& key) {
    const std::string_view t = trim(text);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                              "': unparsable integer '" + std::string(t) + "'",
                          line, key);
    return value;
}

std::vector<double> parse_value_list(std::string_view text, int line,
                                     const std::string& key) {
    std::vector<double> values;
    std::size_t start = 0;
    const std::string s(text);
    while (start <= s.size()) {
        std::size_t comma = s.find(',', start);
        if (comma == std::string::npos) comma = s.size();
        values.push_back(
            parse_number(std::string_view(s).substr(start, comma - start), line, key));
        start = comma + 1;
        if (comma == s.size()) break;
    }
    return values;
}

[[noreturn]] void invariant_error(const RawConfig& raw, const std::string& key,
                                  const std::string& what) {
    const int line = raw.line_of(key);
    std::string msg = "key '" + key + "': " + what;
    if (line > 0) msg = "line " + std::to_string(line) + ": " + msg;
    throw ConfigError(msg, line, key);
}

}  // namespace

int RawConfig::line_of(std::string_view key) const {
    for (const auto& [k, line] : lines_)
        if (k == key) return line;
    return 0;
}

void RawConfig::set_line(std::string_view key, int line) {
    lines_.emplace_back(std::string(key), line);
}

RawConfig parse_config_raw(std::string_view text) {
    static const std::set<std::string, std::less<>> known = {
        "beta",       "gamma",        "s0",      "i0",      "r0",
        "t_end",      "n_samples",    "sweep_param", "sweep_values",
        "out_csv",    "out_svg"};

    RawConfig raw;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        ++line_no;
        pos = eol + 1;

        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) {
            if (pos > text.size()) break;
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) +
                                  ": expected 'key = value'",
                              line_no);
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (!known.contains(key))
            throw ConfigError("line " + std::to_string(line_no) +
                                  ": unknown key '" + key + "'",
                              line_no, key);
        if (raw.line_of(key) > 0)
            throw ConfigError("line " + std::to_string(line_no) +
                                  ": duplicate key '" + key + "'",
                              line_no, key);
        raw.set_line(key, line_no);

        if (key == "beta") raw.beta = parse_number(value, line_no, key);
        else if (key == "gamma") raw.gamma = parse_number(value, line_no, key);
        else if (key == "s0") raw.s0 = parse_number(value, line_no, key);
        else if (key == "i0") raw.i0 = parse_number(value, line_no, key);
        else if (key == "r0") raw.r0 = parse_number(value, line_no, key);
        else if (key == "t_end") raw.t_end = parse_number(value, line_no, key);
        else if (key == "n_samples") raw.n_samples = parse_integer(value, line_no, key);
        else if (key == "sweep_param") raw.sweep_param = std::string(value);
        else if (key == "sweep_values") raw.sweep_values = std::string(value);
        else if (key == "out_csv") raw.out_csv = std::string(value);
        else if (key == "out_svg") raw.out_svg = std::string(value);

        if (pos > text.size()) break;
    }
    return raw;
}

RunConfig finalize_config(const RawConfig& raw) {
    std::string missing;
    const auto require = [&missing](const auto& field, const char* name) {
        if (!field) {
            if (!missing.empty()) missing += ", ";
            missing += name;
        }
    };
    require(raw.beta, "beta");
    require(raw.gamma, "gamma");
    require(raw.s0, "s0");
    require(raw.i0, "i0");
    require(raw.r0, "r0");
    if (!missing.empty())
        throw ConfigError("missing required keys: " + missing);

    RunConfig cfg;
    cfg.beta = *raw.beta;
    cfg.gamma = *raw.gamma;
    cfg.s0 = *raw.s0;
    cfg.i0 = *raw.i0;
    cfg.r0 = *raw.r0;
    if (raw.t_end) cfg.t_end = *raw.t_end;
    if (raw.n_samples) cfg.n_samples = *raw.n_samples;
    cfg.out_csv = raw.out_csv;
    cfg.out_svg = raw.out_svg;

    if (!(cfg.beta >= 0.0) || !std::isfinite(cfg.beta))
        invariant_error(raw, "beta", "must be finite and >= 0");
    if (!(cfg.gamma >= 0.0) || !std::isfinite(cfg.gamma))
        invariant_error(raw, "gamma", "must be finite and >= 0");
    if (!(cfg.s0 >= 0.0) || !std::isfinite(cfg.s0))
        invariant_error(raw, "s0", "must be finite and >= 0");
    if (!(cfg.i0 >= 0.0) || !std::isfinite(cfg.i0))
        invariant_error(raw, "i0", "must be finite and >= 0");
    if (!(cfg.r0 >= 0.0) || !std::isfinite(cfg.r0))
        invariant_error(raw, "r0", "must be finite and >= 0");
    if (!(cfg.s0 + cfg.i0 + cfg.r0 > 0.0))
        invariant_error(raw, "s0", "population s0+i0+r0 must be positive");
    if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end))
        invariant_error(raw, "t_end", "must be finite and > 0");
    if (cfg.n_samples < 2)
        invariant_error(raw, "n_samples", "must be >= 2");

    if (raw.sweep_param.has_value() != raw.sweep_values.has_value()) {
        const char* key =
            raw.sweep_param ? "sweep_values" : "sweep_param";
        throw ConfigError(std::string("key '") + key +
                              "': sweep_param and sweep_values must be given "
                              "together",
                          0, key);
    }
    if (raw.sweep_param) {
        SweepRequest req;
        req.parameter = *raw.sweep_param;
        if (req.parameter != "beta" && req.parameter != "gamma" &&
            req.parameter != "seed")
            invariant_error(raw, "sweep_param",
                            "must be one of beta, gamma, seed");
        req.values = parse_value_list(*raw.sweep_values,
                                      raw.line_of("sweep_values"),
                                      "sweep_values");
        if (req.values.empty())
            invariant_error(raw, "sweep_values", "must be nonempty");
        const double n = cfg.s0 + cfg.i0 + cfg.r0;
        for (double v : req.values) {
            if (!std::isfinite(v))
                invariant_error(raw, "sweep_values", "must be finite");
            if (req.parameter == "seed" && (v < 0.0 || v > n))
                invariant_error(raw, "sweep_values",
                                "seed values must be in [0, n]");
            if (req.parameter != "seed" && v < 0.0)
                invariant_error(raw, "sweep_values", "must be >= 0");
        }
        cfg.sweep = std::move(req);
    }
    return cfg;
}

RunConfig parse_config(std::string_view text) {
    return finalize_config(parse_config_raw(text));
}

campaign::Scenario to_scenario(const RunConfig& cfg, std::string label) {
    campaign::Scenario scn;
    scn.params = {cfg.beta, cfg.gamma};
    scn.initial = {cfg.s0, cfg.i0, cfg.r0};
    scn.pop = {cfg.s0 + cfg.i0 + cfg.r0};
    scn.t_end = cfg.t_end;
    scn.n_samples = cfg.n_samples;
    scn.label = std::move(label);
    return scn;
}

campaign::SweepSpec to_sweep_spec(const RunConfig& cfg, std::string label) {
    if (!cfg.sweep)
        throw ConfigError(
            "key 'sweep_param': a sweep requires sweep_param and sweep_values",
            0, "sweep_param");
    campaign::SweepSpec spec;
    spec.base = to_scenario(cfg, std::move(label));
    if (cfg.sweep->parameter == "beta")
        spec.parameter = campaign::SweepParameter::Beta;
    else if (cfg.sweep->parameter == "gamma")
        spec.parameter = campaign::SweepParameter::Gamma;
    else
        spec.parameter = campaign::SweepParameter::Seed;
    spec.values = cfg.sweep->values;
    return spec;
}

}  // namespace viralsim::io
