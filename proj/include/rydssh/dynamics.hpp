// dynamics.hpp - spectral propagation of a bare initial state
#pragma once

#include "rydssh/spectral.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

namespace rydssh {

// Phenomenological open-system knobs. Absent times mean "off".
struct DecoherenceParams {
    std::optional<double> survival_time_us;   // uniform decay of all populations
    std::optional<double> dephasing_time_us;  // damps dressed-basis cross terms
    bool background_bin = false;              // report decayed population as an extra slot

    void validate() const;
    bool closed() const noexcept { return !survival_time_us && !dephasing_time_us; }
};

using PopulationTable = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct PopulationTrajectory {
    std::vector<double> times_us;
    PopulationTable populations;               // one row per time, one column per site
    std::optional<std::vector<double>> background;
    std::vector<double> survival;
    bool normalized = false;

    std::size_t sites() const noexcept { return static_cast<std::size_t>(populations.cols()); }
    std::vector<double> site_series(std::size_t site) const;
};

// The one place where kHz * us becomes radians: 2*pi * f * t * 1e-3.
double phase_radians(double frequency_khz, double time_us) noexcept;

std::vector<double> uniform_grid(double t_max_us, std::size_t samples);

// Uniform grid on [0, t_max] with at least 20 samples per period of the largest
// eigenvalue gap (and never fewer than min_samples).
std::vector<double> anti_alias_grid(const DressedSpectrum& spectrum, double t_max_us,
                                    std::size_t min_samples = 64);

// Closed-system populations after time t (any sign of t), all sites.
std::vector<double> closed_populations(const DressedSpectrum& spectrum, std::size_t initial_site,
                                       double time_us);

// OpenMP-parallel over time points. Uses the factorised amplitude form
// P = D |sum_a <s'|a><a|s> e^{-i w_a t}|^2 + (1 - D) sum_a <s'|a>^2 <a|s>^2, times survival.
PopulationTrajectory evolve(const DressedSpectrum& spectrum, std::size_t initial_site,
                            const std::vector<double>& times_us, const DecoherenceParams& dec = {});

// Serial reference: literal double sum over dressed pairs with cosine phases.
PopulationTrajectory evolve_serial(const DressedSpectrum& spectrum, std::size_t initial_site,
                                   const std::vector<double>& times_us,
                                   const DecoherenceParams& dec = {});

// Divide populations by survival at each time; idempotent. Background slot is untouched.
PopulationTrajectory fractionalize(const PopulationTrajectory& traj);

}  // namespace rydssh
