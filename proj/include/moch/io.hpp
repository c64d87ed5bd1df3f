#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "moch/characteristics.hpp"
#include "moch/eulerian.hpp"
#include "moch/lagrangian.hpp"

// Plain-text CSV persistence. Every real number is written with 17
// significant digits so that reading a file back reproduces the doubles
// exactly. Metadata sits in leading `# key = value` lines.
namespace moch::io {

std::string format_number(double v);

/// Columns x,m,gamma,u,mx.
void write_snapshot(std::ostream& out, const EulerianState& state, double lambda, CoefficientSet set, double dt);
/// Columns label,beta,x,m,theta.
void write_snapshot(std::ostream& out, const LagrangianState& state, CoefficientSet set, double dt);

EulerianState read_eulerian_snapshot(std::istream& in, double* lambda = nullptr, CoefficientSet* set = nullptr,
                                     double* dt = nullptr);
LagrangianState read_lagrangian_snapshot(std::istream& in, CoefficientSet* set = nullptr, double* dt = nullptr);

/// dir/snapshot_000000.csv, ... plus dir/blowup.csv.
void write_trajectory(const std::filesystem::path& dir, const EulerianTrajectory& trajectory);
/// dir/snapshot_000000.csv, ... plus dir/breaking.csv
/// (time,x_location,label_lo,label_hi,node_lo,node_hi,theta_rate).
void write_trajectory(const std::filesystem::path& dir, const LagrangianTrajectory& trajectory);

/// Throws InvalidInput when the directory holds no snapshots or a file is malformed.
EulerianTrajectory read_eulerian_trajectory(const std::filesystem::path& dir);
LagrangianTrajectory read_lagrangian_trajectory(const std::filesystem::path& dir);

/// Columns t,beta,x,m with the starting point in the header.
void write_trace(const std::filesystem::path& file, const Trace& trace, double y0);

}  // namespace moch::io
