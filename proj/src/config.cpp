#include "moch/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "moch/errors.hpp"
#include "moch/numerics.hpp"

namespace moch {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view value) {
    double out = 0.0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
        throw ConfigurationError("'" + std::string(key) + "' expects a finite number, got '" + std::string(value) + "'");
    }
    return out;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view value) {
    std::uint64_t out = 0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw ConfigurationError("'" + std::string(key) + "' expects a nonnegative integer, got '" +
                                 std::string(value) + "'");
    }
    return out;
}

std::vector<double> parse_list(std::string_view key, std::string_view value) {
    std::vector<double> out;
    while (!value.empty()) {
        const auto comma = value.find(',');
        const auto item = trim(value.substr(0, comma));
        if (!item.empty()) out.push_back(parse_double(key, item));
        if (comma == std::string_view::npos) break;
        value.remove_prefix(comma + 1);
    }
    return out;
}

std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::pair<double, double>> read_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot open initial_file '" + path + "'");
    std::vector<std::pair<double, double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        std::string text(body);
        for (char& c : text) {
            if (c == ',') c = ' ';
        }
        std::istringstream fields(text);
        double x = 0.0;
        double m = 0.0;
        if (!(fields >> x >> m)) {
            // a header row of column names is allowed before any data
            if (rows.empty()) continue;
            throw ConfigurationError(path + ":" + std::to_string(lineno) + ": expected two numbers");
        }
        if (!rows.empty() && !(x > rows.back().first)) {
            throw ConfigurationError(path + ":" + std::to_string(lineno) + ": abscissae must increase");
        }
        rows.emplace_back(x, m);
    }
    if (rows.size() < 2) throw ConfigurationError("initial_file '" + path + "' needs at least two samples");
    return rows;
}

}  // namespace

std::string_view to_string(Preset p) {
    switch (p) {
        case Preset::gaussian: return "gaussian";
        case Preset::peakon_like: return "peakon_like";
        case Preset::steepening: return "steepening";
        case Preset::from_file: return "from_file";
    }
    return "gaussian";
}

Preset parse_preset(std::string_view name) {
    if (name == "gaussian") return Preset::gaussian;
    if (name == "peakon_like" || name == "peakon-like") return Preset::peakon_like;
    if (name == "steepening") return Preset::steepening;
    if (name == "from_file" || name == "from-file") return Preset::from_file;
    throw ConfigurationError("unknown preset '" + std::string(name) + "'");
}

void RunConfig::validate() const {
    if (lambda == 0.0 || !std::isfinite(lambda)) throw ConfigurationError("lambda must be finite and nonzero");
    if (!std::isfinite(amplitude)) throw ConfigurationError("amplitude must be finite");
    if (!(half_width > 0.0)) throw ConfigurationError("half_width must be positive");
    if (N < 16) throw ConfigurationError("N must be at least 16");
    if (nodes < 16) throw ConfigurationError("nodes must be at least 16");
    if (!(dt > 0.0)) throw ConfigurationError("dt must be positive");
    if (!(T >= 0.0)) throw ConfigurationError("T must be nonnegative");
    if (output_every == 0) throw ConfigurationError("output_every must be at least 1");
    if (out.empty()) throw ConfigurationError("out must name a directory");
    if (!(equivalence_tolerance > 0.0)) throw ConfigurationError("equivalence_tolerance must be positive");
    if (!(invariant_slack >= 0.0)) throw ConfigurationError("invariant_slack must be nonnegative");
    if (!(blowup_threshold > 0.0)) throw ConfigurationError("blowup_threshold must be positive");
    if (!(stability_factor > 0.0)) throw ConfigurationError("stability_factor must be positive");
    if (levels == 0) throw ConfigurationError("levels must be at least 1");
    if (!(jitter >= 0.0 && jitter < 0.5)) throw ConfigurationError("jitter must lie in [0, 0.5)");
    if (preset == Preset::from_file && initial_file.empty()) {
        throw ConfigurationError("preset from_file needs initial_file");
    }
}

void set_option(RunConfig& c, std::string_view key, std::string_view value) {
    value = trim(value);
    if (key == "lambda") {
        c.lambda = parse_double(key, value);
    } else if (key == "preset") {
        c.preset = parse_preset(value);
    } else if (key == "amplitude") {
        c.amplitude = parse_double(key, value);
    } else if (key == "initial_file") {
        c.initial_file = std::string(value);
    } else if (key == "half_width" || key == "L") {
        c.half_width = parse_double(key, value);
    } else if (key == "N") {
        c.N = parse_unsigned(key, value);
    } else if (key == "nodes") {
        c.nodes = parse_unsigned(key, value);
    } else if (key == "dt") {
        c.dt = parse_double(key, value);
    } else if (key == "T") {
        c.T = parse_double(key, value);
    } else if (key == "output_every") {
        c.output_every = parse_unsigned(key, value);
    } else if (key == "out") {
        c.out = std::string(value);
    } else if (key == "coefficient_set") {
        try {
            c.coefficient_set = parse_coefficient_set(value);
        } catch (const Error& e) {
            throw ConfigurationError(e.what());
        }
    } else if (key == "equivalence_tolerance") {
        c.equivalence_tolerance = parse_double(key, value);
    } else if (key == "invariant_slack") {
        c.invariant_slack = parse_double(key, value);
    } else if (key == "blowup_threshold") {
        c.blowup_threshold = parse_double(key, value);
    } else if (key == "stability_factor") {
        c.stability_factor = parse_double(key, value);
    } else if (key == "levels") {
        c.levels = parse_unsigned(key, value);
    } else if (key == "jitter") {
        c.jitter = parse_double(key, value);
    } else if (key == "seed") {
        c.seed = parse_unsigned(key, value);
    } else if (key == "trace_points") {
        c.trace_points = parse_list(key, value);
    } else {
        throw ConfigurationError("unknown key '" + std::string(key) + "'");
    }
}

RunConfig parse_config(std::string_view text, RunConfig base) {
    std::size_t lineno = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigurationError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        try {
            set_option(base, key, line.substr(eq + 1));
        } catch (const ConfigurationError& e) {
            throw ConfigurationError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_config(text.str(), std::move(base));
    } catch (const ConfigurationError& e) {
        throw ConfigurationError(path + ": " + e.what());
    }
}

std::string render_config(const RunConfig& c) {
    std::ostringstream o;
    o << "lambda = " << number(c.lambda) << '\n'
      << "preset = " << to_string(c.preset) << '\n'
      << "amplitude = " << number(c.amplitude) << '\n';
    if (!c.initial_file.empty()) o << "initial_file = " << c.initial_file << '\n';
    o << "half_width = " << number(c.half_width) << '\n'
      << "N = " << c.N << '\n'
      << "nodes = " << c.nodes << '\n'
      << "dt = " << number(c.dt) << '\n'
      << "T = " << number(c.T) << '\n'
      << "output_every = " << c.output_every << '\n'
      << "out = " << c.out << '\n'
      << "coefficient_set = " << to_string(c.coefficient_set) << '\n'
      << "equivalence_tolerance = " << number(c.equivalence_tolerance) << '\n'
      << "invariant_slack = " << number(c.invariant_slack) << '\n'
      << "blowup_threshold = " << number(c.blowup_threshold) << '\n'
      << "stability_factor = " << number(c.stability_factor) << '\n'
      << "levels = " << c.levels << '\n'
      << "jitter = " << number(c.jitter) << '\n'
      << "seed = " << c.seed << '\n'
      << "trace_points = ";
    for (std::size_t i = 0; i < c.trace_points.size(); ++i) o << (i ? ", " : "") << number(c.trace_points[i]);
    o << '\n';
    return o.str();
}

EulerianState initial_state(const RunConfig& c, std::size_t count) {
    c.validate();
    EulerianState s;
    s.grid = UniformGrid::symmetric(c.half_width, count);
    s.m.resize(count);
    const double a = c.amplitude;
    if (c.preset == Preset::from_file) {
        const auto rows = read_profile(c.initial_file);
        std::vector<double> xs;
        std::vector<double> ms;
        for (const auto& [x, m] : rows) {
            xs.push_back(x);
            ms.push_back(m);
        }
        for (std::size_t i = 0; i < count; ++i) {
            const double x = s.grid.x(i);
            s.m[i] = (x < xs.front() || x > xs.back()) ? 0.0 : numerics::interpolate(xs, ms, x);
        }
        return s;
    }
    for (std::size_t i = 0; i < count; ++i) {
        const double x = s.grid.x(i);
        switch (c.preset) {
            case Preset::gaussian: s.m[i] = a * std::exp(-x * x); break;
            case Preset::peakon_like: s.m[i] = a * std::exp(-std::abs(x)); break;
            case Preset::steepening: s.m[i] = -a * x * std::exp(-x * x); break;
            case Preset::from_file: break;
        }
    }
    return s;
}

EulerianSettings eulerian_settings(const RunConfig& c) {
    EulerianSettings s;
    s.lambda = c.lambda;
    s.set = c.coefficient_set;
    s.blowup_threshold = c.blowup_threshold;
    s.stability_factor = c.stability_factor;
    return s;
}

}  // namespace moch
