// csv.hpp - CSV schemas for trajectories, sweeps and SFI traces
#pragma once

#include "rydssh/analysis.hpp"
#include "rydssh/dynamics.hpp"
#include "rydssh/sfi.hpp"

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace rydssh::csv {

// Every number goes through here: printf "%.9g", so output is byte-stable.
std::string format_number(double value);

// t_us, p_<label>..., [background,] survival
std::string trajectory(const PopulationTrajectory& traj, const std::vector<int>& labels);
// param_value, <observable columns...>
std::string sweep(const SweepResult& result);
// t_us, signal
std::string trace(const SFITrace& trace);

// Plot-ready long format: series, x, y
std::string trajectory_long(const PopulationTrajectory& traj, const std::vector<int>& labels);
std::string sweep_long(const SweepResult& result);

SFITrace parse_trace(std::istream& in);
SFITrace read_trace(const std::filesystem::path& path);

// Every *.csv in `dir`; the label is the leading integer of the file stem
// (e.g. "59s.csv" -> 59). Sorted by label.
std::vector<SFITrace> load_basis_directory(const std::filesystem::path& dir);

// Write to a sibling temporary file, then rename over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace rydssh::csv
