// csv.hpp - CSV emission for trajectories, spectra and sweep tables
//
// Every floating-point field is written with 17 significant digits so that
// reading a file back reproduces the doubles exactly.

#pragma once

#include "cavlab/dynamics.hpp"
#include "cavlab/scattering.hpp"
#include "cavlab/sweep.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cavlab {

// "nan", "inf", "-inf" for the non-finite values.
std::string format_double(double v);
// Inverse of format_double. Throws Error{Io} on malformed text.
double parse_double(std::string_view text);

const std::vector<std::string>& trajectory_columns();
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

// delta, t_forward, t_backward, then re/im of S row-major.
const std::vector<std::string>& spectrum_columns();
void write_spectrum_csv(std::ostream& out, const std::vector<ScatteringResult>& spectrum);

// "# key: value" metadata, "# shape: n1[xn2]", header, then one row per cell.
// Failed cells are written as "error:<name>".
void write_sweep_csv(std::ostream& out, const SweepTable& table);
SweepTable read_sweep_csv(std::istream& in);

// Throws Error{Io} when the file cannot be written.
void write_file(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

} // namespace cavlab
