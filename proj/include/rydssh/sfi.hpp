// sfi.hpp - selective field ionization: ramp model, synthetic traces, unmixing
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace rydssh {

namespace constants {
inline constexpr double kAtomicUnitFieldVPerCm = 5.142e9;
inline constexpr double kQuantumDefectTripletS = 3.371;  // Sr 5sns 3S1
inline constexpr double kDefaultPeakFieldVPerCm = 40.0;
inline constexpr double kDefaultRampTimeConstantUs = 5.0;
inline constexpr double kDefaultTraceWidthUs = 0.3;
}  // namespace constants

// E(t) = peak * (1 - exp(-t / time_constant)).
struct RampParams {
    double peak_field_v_per_cm = constants::kDefaultPeakFieldVPerCm;
    double time_constant_us = constants::kDefaultRampTimeConstantUs;

    void validate() const;
    double field_at(double t_us) const;
};

struct SFITrace {
    std::vector<double> times_us;
    std::vector<double> signal;
    std::optional<int> label;
};

// Adiabatic threshold 1/(16 (n - defect)^4) in atomic units.
double ionization_field_au(int n, double quantum_defect = constants::kQuantumDefectTripletS);
// Same threshold in V/cm.
double ionization_field(int n, double quantum_defect = constants::kQuantumDefectTripletS);

// Ramp inversion t = -tau ln(1 - E/E_peak). Fields at or above the peak never
// ionize within the ramp: UnsupportedError.
double ionization_time(double field_v_per_cm, const RampParams& ramp);

// Unit-area Gaussian of standard deviation `width_us` centred on the ionization time of n.
SFITrace synthesize_trace(int n, const RampParams& ramp, double width_us,
                          const std::vector<double>& grid_us,
                          double quantum_defect = constants::kQuantumDefectTripletS);

// Broad unit-area Gaussian standing in for decay products (3P levels) spread over
// the window: centred mid-window, sigma = window / 4.
SFITrace background_trace(const std::vector<double>& grid_us);

// Weighted sum of traces sharing one grid.
SFITrace mix_traces(const std::vector<SFITrace>& traces, const std::vector<double>& weights);

struct UnmixResult {
    std::vector<double> raw;          // non-negative least-squares coefficients per basis trace
    std::vector<double> normalized;   // raw / sum(raw)
    std::optional<double> background; // coefficient of the background trace, if one was given
    double residual_norm = 0.0;
};

// Non-negative least squares fit of `observed` by the basis (+ optional background).
// Throws NumericError naming the most collinear pair if the basis is rank deficient.
UnmixResult unmix(const SFITrace& observed, const std::vector<SFITrace>& basis,
                  const std::optional<SFITrace>& background = std::nullopt);

}  // namespace rydssh
