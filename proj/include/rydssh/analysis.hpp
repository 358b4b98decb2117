// analysis.hpp - parameter sweeps and observable extraction
#pragma once

#include "rydssh/dynamics.hpp"
#include "rydssh/lattice.hpp"
#include "rydssh/spectral.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace rydssh {

// Sweep points are independent; `parallel` fans them out with OpenMP. Both modes
// evaluate every point with the same kernel and aggregate by parameter index, so
// the results are bit-identical.
enum class Execution { serial, parallel };

struct SweepResult {
    std::string parameter_name;
    std::string parameter_unit;
    std::vector<double> parameter_values;
    std::vector<std::string> observable_names;
    std::vector<std::vector<double>> observables;  // one record per parameter value

    std::vector<double> column(const std::string& name) const;
};

// Edge splitting as a function of the detuning of one bond (the others keep the base value).
SweepResult sweep_edge_detuning(const LatticeSpec& base, std::size_t bond_index,
                                const std::vector<double>& detunings_khz,
                                Execution mode = Execution::parallel);

// Max over t in [0, window] of the far-edge population starting from the first site, per
// detuning of `bond_index`. window_us <= 0 selects 2 / (resonant edge splitting).
SweepResult edge_transfer_resonance(const LatticeSpec& base, std::size_t bond_index,
                                    const std::vector<double>& detunings_khz,
                                    double window_us = 0.0,
                                    Execution mode = Execution::parallel);

// Full width at half maximum of curve(x) around its global maximum, using linear
// interpolation between samples. Throws NumericError if either half-crossing is
// outside the sampled range.
double full_width_half_max(const std::vector<double>& x, const std::vector<double>& curve);

// Per-site populations at probe_time after preparing the first (edge) site.
SweepResult sweep_protection_breakdown(const LatticeSpec& base, std::size_t bond_index,
                                       const std::vector<double>& detunings_khz,
                                       double probe_time_us, const DecoherenceParams& dec = {},
                                       Execution mode = Execution::parallel);

SweepResult splitting_vs_size(double omega_weak_khz, double omega_strong_khz,
                              const std::vector<int>& sizes,
                              Execution mode = Execution::parallel);

// Least-squares slope of ln(splitting) against unit-cell count (size / 2).
double log_splitting_slope(const SweepResult& by_size);

// Largest non-DC peak of the DFT of P_site(t), refined by parabolic interpolation.
double dominant_oscillation_frequency(const PopulationTrajectory& traj, std::size_t site_index);

// All dressed energies vs Omega_S/Omega_W with Omega_W fixed.
SweepResult dressed_energy_scan(double omega_weak_khz, const std::vector<double>& ratios,
                                std::size_t size, Execution mode = Execution::parallel);

}  // namespace rydssh
