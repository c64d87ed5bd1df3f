#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "moch/eulerian.hpp"

namespace moch {

enum class Preset { gaussian, peakon_like, steepening, from_file };

std::string_view to_string(Preset p);
/// Throws ConfigurationError on an unknown name.
Preset parse_preset(std::string_view name);

/// Everything a run needs. Read from a line-oriented `key = value` file;
/// every field has a default.
struct RunConfig {
    double lambda = 1.0;
    Preset preset = Preset::gaussian;
    double amplitude = 1.0;
    /// Two columns (x, m) separated by commas or blanks; used by from_file.
    std::string initial_file;
    double half_width = 20.0;
    std::size_t N = 512;
    std::size_t nodes = 512;
    double dt = 1e-3;
    double T = 0.5;
    std::size_t output_every = 10;
    std::string out = "moch-out";
    CoefficientSet coefficient_set = CoefficientSet::rederived;

    double equivalence_tolerance = 1e-3;
    double invariant_slack = 1e-2;
    double blowup_threshold = 1e3;
    double stability_factor = 1.0;

    /// Refinement levels used by compare (the finest is N, nodes).
    std::size_t levels = 3;
    /// Label jitter (fraction of a spacing) for the label-grid experiment; 0 disables it.
    double jitter = 0.25;
    std::uint64_t seed = 1;
    /// Initial positions traced by the trace command.
    std::vector<double> trace_points{-1.0, 0.0, 1.0};

    /// Throws ConfigurationError on any violated invariant.
    void validate() const;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys and
/// malformed values raise ConfigurationError naming the line.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Applies one `key = value` assignment.
void set_option(RunConfig& config, std::string_view key, std::string_view value);

/// Renders every field so that parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& config);

/// m0 on the grid of `count` points over [-half_width, half_width].
EulerianState initial_state(const RunConfig& config, std::size_t count);

EulerianSettings eulerian_settings(const RunConfig& config);

}  // namespace moch
