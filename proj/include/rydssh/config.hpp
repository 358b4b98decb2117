// config.hpp - declarative run file (JSON) for the CLI
#pragma once

#include "rydssh/dynamics.hpp"
#include "rydssh/errors.hpp"
#include "rydssh/lattice.hpp"
#include "rydssh/sfi.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rydssh {

// Raised for unreadable, malformed or incomplete run files. `what()` carries the field path.
class ConfigError : public SpecError {
public:
    using SpecError::SpecError;
};

enum class Experiment { evolve, sweep_edge_detuning, sweep_protection, splitting_vs_size, dressed_scan, sfi_pipeline };

std::string to_string(Experiment e);

struct TimeConfig {
    std::optional<double> t_max_us;
    std::optional<std::size_t> samples;        // absent: anti-aliasing rule picks it
    std::optional<std::vector<double>> grid_us;
};

struct SweepConfig {
    std::optional<std::size_t> bond_index;
    std::vector<double> values;                // detunings in kHz
    double probe_time_us = 2.5;
    std::vector<int> sizes;
    std::vector<double> ratios;
    std::optional<double> omega_weak_khz;
    std::optional<double> omega_strong_khz;
    std::optional<std::size_t> size;
    bool transfer_resonance = false;           // add the edge-transfer column and its FWHM
    double transfer_window_us = 0.0;           // <= 0: two edge-tunneling periods
};

struct SfiConfig {
    RampParams ramp;
    double width_us = constants::kDefaultTraceWidthUs;
    double quantum_defect = constants::kQuantumDefectTripletS;
    double noise_fraction = 0.0;
    double window_us = 15.0;
    std::size_t samples = 1501;
    std::optional<std::string> basis_dir;
};

struct OutputConfig {
    std::optional<std::string> dir;
    std::string stem = "run";
    bool long_format = false;
};

struct RunConfig {
    Experiment experiment = Experiment::evolve;
    std::optional<LatticeSpec> lattice;
    std::optional<int> initial_site;           // site label
    std::optional<TimeConfig> time;
    DecoherenceParams decoherence;
    bool fractional = false;
    std::optional<SweepConfig> sweep;
    SfiConfig sfi;
    OutputConfig output;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Experiment-specific required fields. Throws ConfigError listing everything missing.
void validate_config(const RunConfig& config);

}  // namespace rydssh
