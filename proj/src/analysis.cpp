#include "rydssh/analysis.hpp"

#include "rydssh/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <mutex>
#include <string>

namespace rydssh {

namespace {

using PointKernel = std::function<std::vector<double>(std::size_t)>;

std::vector<std::vector<double>> evaluate_points(std::size_t count, Execution mode,
                                                 const PointKernel& kernel) {
    std::vector<std::vector<double>> records(count);
    if (mode == Execution::serial) {
        for (std::size_t i = 0; i < count; ++i) records[i] = kernel(i);
        return records;
    }
    // Exceptions must not escape an OpenMP region; capture the first and rethrow.
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            records[static_cast<std::size_t>(i)] = kernel(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return records;
}

void require_monotone(const std::vector<double>& values, const char* what) {
    if (values.empty()) throw SpecError(std::string(what) + ": no sweep values");
    bool up = true, down = true;
    for (std::size_t i = 1; i < values.size(); ++i) {
        up = up && values[i] > values[i - 1];
        down = down && values[i] < values[i - 1];
    }
    if (!up && !down) throw SpecError(std::string(what) + ": sweep values must be strictly monotone");
}

void require_bond(const LatticeSpec& base, std::size_t bond_index) {
    base.validate();
    if (bond_index >= base.couplings_khz.size()) {
        throw SpecError("bond index " + std::to_string(bond_index) + " out of range for " +
                        std::to_string(base.size()) + "-site lattice");
    }
}

LatticeSpec with_detuning(LatticeSpec spec, std::size_t bond_index, double detuning_khz) {
    spec.bond_detunings_khz[bond_index] = detuning_khz;
    return spec;
}

std::vector<std::string> site_columns(const LatticeSpec& spec) {
    std::vector<std::string> names;
    for (int label : spec.site_labels) names.push_back("p_" + std::to_string(label));
    return names;
}

std::mutex fftw_planner_mutex;

}  // namespace

std::vector<double> SweepResult::column(const std::string& name) const {
    auto it = std::find(observable_names.begin(), observable_names.end(), name);
    if (it == observable_names.end()) throw SpecError("sweep has no observable '" + name + "'");
    const auto idx = static_cast<std::size_t>(it - observable_names.begin());
    std::vector<double> out;
    out.reserve(observables.size());
    for (const auto& rec : observables) out.push_back(rec[idx]);
    return out;
}

SweepResult sweep_edge_detuning(const LatticeSpec& base, std::size_t bond_index,
                                const std::vector<double>& detunings_khz, Execution mode) {
    require_bond(base, bond_index);
    require_monotone(detunings_khz, "sweep_edge_detuning");
    SweepResult out{"bond_detuning_" + std::to_string(bond_index), "kHz", detunings_khz,
                    {"splitting_khz"}, {}};
    out.observables = evaluate_points(detunings_khz.size(), mode, [&](std::size_t i) {
        const auto spectrum = diagonalize(build_hamiltonian(with_detuning(base, bond_index, detunings_khz[i])));
        return std::vector<double>{edge_splitting(spectrum)};
    });
    return out;
}

SweepResult edge_transfer_resonance(const LatticeSpec& base, std::size_t bond_index,
                                    const std::vector<double>& detunings_khz, double window_us,
                                    Execution mode) {
    require_bond(base, bond_index);
    require_monotone(detunings_khz, "edge_transfer_resonance");
    if (window_us <= 0.0) {
        LatticeSpec resonant = base;
        std::fill(resonant.bond_detunings_khz.begin(), resonant.bond_detunings_khz.end(), 0.0);
        const double splitting = edge_splitting(diagonalize(build_hamiltonian(resonant)));
        if (!(splitting > 0.0)) throw NumericError("edge_transfer_resonance: zero resonant splitting");
        window_us = 2.0 / (splitting * 1e-3);
    }
    const std::size_t far = base.size() - 1;
    SweepResult out{"bond_detuning_" + std::to_string(bond_index), "kHz", detunings_khz,
                    {"max_far_edge_population"}, {}};
    out.observables = evaluate_points(detunings_khz.size(), mode, [&](std::size_t i) {
        const auto spectrum = diagonalize(build_hamiltonian(with_detuning(base, bond_index, detunings_khz[i])));
        const auto grid = anti_alias_grid(spectrum, window_us, 512);
        const auto series = evolve(spectrum, 0, grid).site_series(far);
        return std::vector<double>{*std::max_element(series.begin(), series.end())};
    });
    return out;
}

double full_width_half_max(const std::vector<double>& x, const std::vector<double>& curve) {
    if (x.size() != curve.size() || x.size() < 3) {
        throw SpecError("full_width_half_max: need matching x/curve with at least 3 samples");
    }
    const auto peak_it = std::max_element(curve.begin(), curve.end());
    const auto peak = static_cast<std::size_t>(peak_it - curve.begin());
    const double half = 0.5 * *peak_it;

    auto crossing = [&](std::size_t inside, std::size_t outside) {
        const double f = (half - curve[inside]) / (curve[outside] - curve[inside]);
        return x[inside] + f * (x[outside] - x[inside]);
    };

    std::size_t lo = peak;
    while (lo > 0 && curve[lo - 1] >= half) --lo;
    std::size_t hi = peak;
    while (hi + 1 < curve.size() && curve[hi + 1] >= half) ++hi;
    if (lo == 0 || hi + 1 == curve.size()) {
        throw NumericError("full_width_half_max: half maximum not reached inside the sweep range");
    }
    return std::abs(crossing(hi, hi + 1) - crossing(lo, lo - 1));
}

SweepResult sweep_protection_breakdown(const LatticeSpec& base, std::size_t bond_index,
                                       const std::vector<double>& detunings_khz,
                                       double probe_time_us, const DecoherenceParams& dec,
                                       Execution mode) {
    require_bond(base, bond_index);
    require_monotone(detunings_khz, "sweep_protection_breakdown");
    if (!(probe_time_us > 0.0)) throw SpecError("sweep_protection_breakdown: probe time must be positive");
    dec.validate();
    SweepResult out{"bond_detuning_" + std::to_string(bond_index), "kHz", detunings_khz,
                    site_columns(base), {}};
    out.observables = evaluate_points(detunings_khz.size(), mode, [&](std::size_t i) {
        const auto spectrum = diagonalize(build_hamiltonian(with_detuning(base, bond_index, detunings_khz[i])));
        const auto traj = evolve(spectrum, 0, {probe_time_us}, dec);
        const auto row = traj.populations.row(0);
        return std::vector<double>(row.begin(), row.end());
    });
    return out;
}

SweepResult splitting_vs_size(double omega_weak_khz, double omega_strong_khz,
                              const std::vector<int>& sizes, Execution mode) {
    if (sizes.empty()) throw SpecError("splitting_vs_size: no sizes");
    std::vector<double> values;
    for (int m : sizes) {
        if (m < 2 || m % 2 != 0) {
            throw UnsupportedError("splitting_vs_size: sizes must be even and >= 2, got " + std::to_string(m));
        }
        values.push_back(static_cast<double>(m));
    }
    require_monotone(values, "splitting_vs_size");
    SweepResult out{"sites", "", values, {"splitting_khz"}, {}};
    out.observables = evaluate_points(sizes.size(), mode, [&](std::size_t i) {
        const auto spec = make_ssh_chain(1, static_cast<std::size_t>(sizes[i]), omega_weak_khz, omega_strong_khz);
        return std::vector<double>{edge_splitting(diagonalize(build_hamiltonian(spec)))};
    });
    return out;
}

double log_splitting_slope(const SweepResult& by_size) {
    const auto splitting = by_size.column("splitting_khz");
    const std::size_t n = splitting.size();
    if (n < 2) throw NumericError("log_splitting_slope: need at least two sizes");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(splitting[i] > 0.0)) throw NumericError("log_splitting_slope: non-positive splitting");
        const double x = by_size.parameter_values[i] / 2.0;
        const double y = std::log(splitting[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double nd = static_cast<double>(n);
    return (nd * sxy - sx * sy) / (nd * sxx - sx * sx);
}

double dominant_oscillation_frequency(const PopulationTrajectory& traj, std::size_t site_index) {
    constexpr std::size_t kMinSamples = 64;
    constexpr std::size_t kPadding = 8;
    const auto& t = traj.times_us;
    const std::size_t n = t.size();
    if (site_index >= traj.sites()) throw SpecError("dominant_oscillation_frequency: site out of range");
    if (n < kMinSamples) {
        throw NumericError("dominant_oscillation_frequency: need at least 64 samples, got " + std::to_string(n));
    }
    const double dt = (t.back() - t.front()) / static_cast<double>(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs((t[i] - t[i - 1]) - dt) > 1e-6 * dt) {
            throw NumericError("dominant_oscillation_frequency: time grid is not uniform");
        }
    }

    const auto series = traj.site_series(site_index);
    double mean = 0.0;
    for (double p : series) mean += p;
    mean /= static_cast<double>(n);

    const std::size_t padded = n * kPadding;
    const std::size_t bins = padded / 2 + 1;
    std::vector<double> input(padded, 0.0);
    for (std::size_t i = 0; i < n; ++i) input[i] = series[i] - mean;
    std::vector<std::complex<double>> spectrum(bins);

    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex);
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(padded), input.data(),
                                    reinterpret_cast<fftw_complex*>(spectrum.data()), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_planner_mutex);
        fftw_destroy_plan(plan);
    }

    std::vector<double> mag(bins);
    for (std::size_t k = 0; k < bins; ++k) mag[k] = std::abs(spectrum[k]);

    // Largest local maximum away from DC.
    std::size_t best = 0;
    for (std::size_t k = 1; k + 1 < bins; ++k) {
        if (mag[k] >= mag[k - 1] && mag[k] >= mag[k + 1] && (best == 0 || mag[k] > mag[best])) best = k;
    }
    const double noise_floor = 1e-9 * static_cast<double>(n);
    if (best == 0 || mag[best] < noise_floor) {
        throw NumericError("dominant_oscillation_frequency: no oscillation above the noise floor");
    }

    const double a = mag[best - 1], b = mag[best], c = mag[best + 1];
    const double denom = a - 2.0 * b + c;
    const double shift = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
    const double freq_mhz = (static_cast<double>(best) + shift) / (static_cast<double>(padded) * dt);
    const double span = t.back() - t.front();
    if (freq_mhz * span < 1.5) {
        throw NumericError("dominant_oscillation_frequency: trajectory spans fewer than 1.5 periods");
    }
    return freq_mhz * 1e3;
}

SweepResult dressed_energy_scan(double omega_weak_khz, const std::vector<double>& ratios,
                                std::size_t size, Execution mode) {
    for (double r : ratios) {
        if (!(r > 0.0)) throw SpecError("dressed_energy_scan: ratios must be positive");
    }
    require_monotone(ratios, "dressed_energy_scan");
    SweepResult out{"strong_over_weak", "", ratios, {}, {}};
    for (std::size_t a = 0; a < size; ++a) out.observable_names.push_back("w_" + std::to_string(a + 1) + "_khz");
    out.observables = evaluate_points(ratios.size(), mode, [&](std::size_t i) {
        const auto spec = make_ssh_chain(1, size, omega_weak_khz, omega_weak_khz * ratios[i]);
        return diagonalize(build_hamiltonian(spec)).eigenvalues;
    });
    return out;
}

}  // namespace rydssh
