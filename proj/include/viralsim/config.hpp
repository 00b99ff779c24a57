// Line-oriented "key = value" run configuration. Known keys:
//   beta, gamma, s0, i0, r0          (model; beta..r0 required)
//   t_end, n_samples                 (optional; defaults 100 / 1001)
//   sweep_param, sweep_values        (optional pair: beta|gamma|seed, CSV list)
//   out_csv, out_svg                 (optional output paths)
// '#' starts a comment; unknown keys are rejected; errors name line and key.
#ifndef VIRALSIM_CONFIG_HPP
#define VIRALSIM_CONFIG_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "viralsim/campaign.hpp"

namespace viralsim::io {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0, std::string key = "")
        : std::runtime_error(what), line_(line), key_(std::move(key)) {}
    int line() const { return line_; }            // 0 when not line-specific
    const std::string& key() const { return key_; }

private:
    int line_;
    std::string key_;
};

struct SweepRequest {
    std::string parameter;  // "beta" | "gamma" | "seed"
    std::vector<double> values;
};

struct RunConfig {
    double beta = 0.0;
    double gamma = 0.0;
    double s0 = 0.0;
    double i0 = 0.0;
    double r0 = 0.0;
    double t_end = 100.0;
    int n_samples = 1001;
    std::optional<SweepRequest> sweep;
    std::optional<std::string> out_csv;
    std::optional<std::string> out_svg;
};

// Field-by-field staging area so flag overrides and file parsing share one
// validation path (finalize_config).
struct RawConfig {
    std::optional<double> beta, gamma, s0, i0, r0, t_end;
    std::optional<int> n_samples;
    std::optional<std::string> sweep_param, sweep_values;
    std::optional<std::string> out_csv, out_svg;
    // source line per key, for error messages (0 = not from a file)
    int line_of(std::string_view key) const;
    void set_line(std::string_view key, int line);

private:
    std::vector<std::pair<std::string, int>> lines_;
};

RawConfig parse_config_raw(std::string_view text);

// Applies defaults, checks required keys and every invariant; throws
// ConfigError naming the offending key (and source line when known).
RunConfig finalize_config(const RawConfig& raw);

RunConfig parse_config(std::string_view text);

// Bridges into the campaign layer.
campaign::Scenario to_scenario(const RunConfig& cfg, std::string label);
campaign::SweepSpec to_sweep_spec(const RunConfig& cfg, std::string label);

}  // namespace viralsim::io

#endif
