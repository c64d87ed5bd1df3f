#include "moch/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "moch/errors.hpp"
#include "moch/transform.hpp"

namespace moch::io {

namespace {

struct Table {
    std::map<std::string, std::string> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string trimmed(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& text) {
    const std::string t = trimmed(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size()) throw InvalidInput("not a number: '" + text + "'");
    return v;
}

Table read_table(std::istream& in) {
    Table t;
    std::string line;
    while (std::getline(in, line)) {
        line = trimmed(line);
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) t.meta[trimmed(line.substr(1, eq - 1))] = trimmed(line.substr(eq + 1));
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(trimmed(cell));
        if (t.columns.empty()) {
            t.columns = std::move(cells);
            continue;
        }
        if (cells.size() != t.columns.size()) throw InvalidInput("row has the wrong number of columns: " + line);
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(to_double(c));
        t.rows.push_back(std::move(row));
    }
    return t;
}

const std::string& meta(const Table& t, const std::string& key) {
    const auto it = t.meta.find(key);
    if (it == t.meta.end()) throw InvalidInput("missing header field '" + key + "'");
    return it->second;
}

std::vector<double> column(const Table& t, const std::string& name) {
    const auto it = std::find(t.columns.begin(), t.columns.end(), name);
    if (it == t.columns.end()) throw InvalidInput("missing column '" + name + "'");
    const auto k = static_cast<std::size_t>(it - t.columns.begin());
    std::vector<double> out;
    out.reserve(t.rows.size());
    for (const auto& r : t.rows) out.push_back(r[k]);
    return out;
}

std::vector<std::filesystem::path> snapshot_files(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw InvalidInput("no such directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        const auto name = e.path().filename().string();
        if (name.rfind("snapshot_", 0) == 0 && e.path().extension() == ".csv") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw InvalidInput("no snapshots in " + dir.string());
    return files;
}

std::filesystem::path snapshot_name(const std::filesystem::path& dir, std::size_t k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snapshot_%06zu.csv", k);
    return dir / buf;
}

std::ofstream open_out(const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw InvalidInput("cannot write " + file.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InvalidInput("cannot read " + file.string());
    return in;
}

}  // namespace

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_snapshot(std::ostream& out, const EulerianState& state, double lambda, CoefficientSet set, double dt) {
    const auto c = compute_fields(state, lambda, set);
    const auto gamma = m_to_gamma(state);
    out << "# time = " << format_number(state.time) << '\n'
        << "# lambda = " << format_number(lambda) << '\n'
        << "# coefficient_set = " << to_string(set) << '\n'
        << "# dt = " << format_number(dt) << '\n'
        << "# grid = " << format_number(state.grid.origin) << ' ' << format_number(state.grid.spacing) << ' '
        << state.grid.count << '\n'
        << "x,m,gamma,u,mx\n";
    for (std::size_t i = 0; i < state.m.size(); ++i) {
        out << format_number(state.grid.x(i)) << ',' << format_number(state.m[i]) << ','
            << format_number(gamma.gamma[i]) << ',' << format_number(c.u[i]) << ',' << format_number(c.mx[i]) << '\n';
    }
}

void write_snapshot(std::ostream& out, const LagrangianState& state, CoefficientSet set, double dt) {
    out << "# time = " << format_number(state.time) << '\n'
        << "# lambda = " << format_number(state.lambda) << '\n'
        << "# coefficient_set = " << to_string(set) << '\n'
        << "# dt = " << format_number(dt) << '\n'
        << "label,beta,x,m,theta\n";
    for (std::size_t i = 0; i < state.size(); ++i) {
        out << format_number(state.labels[i]) << ',' << format_number(state.beta[i]) << ','
            << format_number(state.x[i]) << ',' << format_number(state.m[i]) << ',' << format_number(state.theta[i])
            << '\n';
    }
}

EulerianState read_eulerian_snapshot(std::istream& in, double* lambda, CoefficientSet* set, double* dt) {
    const auto t = read_table(in);
    EulerianState s;
    s.time = to_double(meta(t, "time"));
    std::istringstream grid(meta(t, "grid"));
    std::string origin;
    std::string spacing;
    std::size_t count = 0;
    if (!(grid >> origin >> spacing >> count)) throw InvalidInput("malformed grid header");
    s.grid.origin = to_double(origin);
    s.grid.spacing = to_double(spacing);
    s.grid.count = count;
    s.m = column(t, "m");
    if (s.m.size() != count) throw InvalidInput("snapshot row count does not match its grid");
    validate(s);
    if (lambda) *lambda = to_double(meta(t, "lambda"));
    if (set) *set = parse_coefficient_set(meta(t, "coefficient_set"));
    if (dt) *dt = to_double(meta(t, "dt"));
    return s;
}

LagrangianState read_lagrangian_snapshot(std::istream& in, CoefficientSet* set, double* dt) {
    const auto t = read_table(in);
    LagrangianState s;
    s.time = to_double(meta(t, "time"));
    s.lambda = to_double(meta(t, "lambda"));
    s.labels = column(t, "label");
    s.beta = column(t, "beta");
    s.x = column(t, "x");
    s.m = column(t, "m");
    s.theta = column(t, "theta");
    validate(s);
    if (set) *set = parse_coefficient_set(meta(t, "coefficient_set"));
    if (dt) *dt = to_double(meta(t, "dt"));
    return s;
}

void write_trajectory(const std::filesystem::path& dir, const EulerianTrajectory& trajectory) {
    std::filesystem::create_directories(dir);
    for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
        auto out = open_out(snapshot_name(dir, k));
        write_snapshot(out, trajectory.states[k], trajectory.lambda, trajectory.set, trajectory.dt);
    }
    auto out = open_out(dir / "blowup.csv");
    const auto& b = trajectory.blowup;
    out << "detected,time,location,max_slope\n"
        << (b.detected ? 1 : 0) << ',' << format_number(b.time) << ',' << format_number(b.location) << ','
        << format_number(b.max_slope) << '\n';
}

void write_trajectory(const std::filesystem::path& dir, const LagrangianTrajectory& trajectory) {
    std::filesystem::create_directories(dir);
    for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
        auto out = open_out(snapshot_name(dir, k));
        write_snapshot(out, trajectory.states[k], trajectory.set, trajectory.dt);
    }
    auto out = open_out(dir / "breaking.csv");
    out << "time,x_location,label_lo,label_hi,node_lo,node_hi,theta_rate\n";
    for (const auto& e : trajectory.events) {
        out << format_number(e.time) << ',' << format_number(e.x_location) << ',' << format_number(e.label_lo) << ','
            << format_number(e.label_hi) << ',' << e.node_lo << ',' << e.node_hi << ',' << format_number(e.theta_rate)
            << '\n';
    }
}

EulerianTrajectory read_eulerian_trajectory(const std::filesystem::path& dir) {
    EulerianTrajectory traj;
    for (const auto& file : snapshot_files(dir)) {
        auto in = open_in(file);
        try {
            traj.states.push_back(read_eulerian_snapshot(in, &traj.lambda, &traj.set, &traj.dt));
        } catch (const Error& e) {
            throw InvalidInput(file.string() + ": " + e.what());
        }
    }
    if (std::filesystem::exists(dir / "blowup.csv")) {
        auto in = open_in(dir / "blowup.csv");
        const auto t = read_table(in);
        if (!t.rows.empty()) {
            traj.blowup.detected = column(t, "detected")[0] != 0.0;
            traj.blowup.time = column(t, "time")[0];
            traj.blowup.location = column(t, "location")[0];
            traj.blowup.max_slope = column(t, "max_slope")[0];
        }
    }
    return traj;
}

LagrangianTrajectory read_lagrangian_trajectory(const std::filesystem::path& dir) {
    LagrangianTrajectory traj;
    for (const auto& file : snapshot_files(dir)) {
        auto in = open_in(file);
        try {
            traj.states.push_back(read_lagrangian_snapshot(in, &traj.set, &traj.dt));
        } catch (const Error& e) {
            throw InvalidInput(file.string() + ": " + e.what());
        }
    }
    traj.lambda = traj.states.front().lambda;
    if (std::filesystem::exists(dir / "breaking.csv")) {
        auto in = open_in(dir / "breaking.csv");
        const auto t = read_table(in);
        const auto time = column(t, "time");
        const auto xl = column(t, "x_location");
        const auto lo = column(t, "label_lo");
        const auto hi = column(t, "label_hi");
        const auto nlo = column(t, "node_lo");
        const auto nhi = column(t, "node_hi");
        const auto rate = column(t, "theta_rate");
        for (std::size_t k = 0; k < time.size(); ++k) {
            traj.events.push_back({time[k], xl[k], lo[k], hi[k], static_cast<std::size_t>(nlo[k]),
                                   static_cast<std::size_t>(nhi[k]), rate[k]});
        }
    }
    return traj;
}

void write_trace(const std::filesystem::path& file, const Trace& trace, double y0) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    auto out = open_out(file);
    out << "# y0 = " << format_number(y0) << '\n'
        << "# iterations = " << trace.iterations << '\n'
        << "# weight_constant = " << format_number(trace.weight_constant) << '\n'
        << "t,beta,x,m\n";
    for (std::size_t n = 0; n < trace.t.size(); ++n) {
        out << format_number(trace.t[n]) << ',' << format_number(trace.beta[n]) << ',' << format_number(trace.x[n])
            << ',' << format_number(trace.m[n]) << '\n';
    }
}

}  // namespace moch::io
