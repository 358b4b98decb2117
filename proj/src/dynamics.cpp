#include "rydssh/dynamics.hpp"

#include "rydssh/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace rydssh {

namespace {

void check_inputs(const DressedSpectrum& spectrum, std::size_t initial_site,
                  const std::vector<double>& times) {
    if (initial_site >= spectrum.dim()) {
        throw SpecError("evolve: initial site " + std::to_string(initial_site) + " out of range");
    }
    if (times.empty()) {
        throw SpecError("evolve: empty time grid");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || times[i] < 0.0) {
            throw SpecError("evolve: times must be finite and non-negative");
        }
        if (i > 0 && times[i] <= times[i - 1]) {
            throw SpecError("evolve: time grid must be strictly increasing");
        }
    }
}

struct Envelope {
    double survival;
    double coherence;  // weight of the dressed-basis cross terms
};

Envelope envelope_at(const DecoherenceParams& dec, double t) {
    Envelope env{1.0, 1.0};
    if (dec.survival_time_us) env.survival = std::exp(-t / *dec.survival_time_us);
    if (dec.dephasing_time_us) env.coherence = std::exp(-t / *dec.dephasing_time_us);
    return env;
}

PopulationTrajectory allocate(std::size_t sites, const std::vector<double>& times,
                              const DecoherenceParams& dec) {
    PopulationTrajectory traj;
    traj.times_us = times;
    traj.populations.resize(static_cast<Eigen::Index>(times.size()), static_cast<Eigen::Index>(sites));
    traj.survival.assign(times.size(), 1.0);
    if (dec.background_bin) traj.background = std::vector<double>(times.size(), 0.0);
    return traj;
}

// Time-averaged (fully dephased) distribution sum_a <s'|a>^2 <a|s>^2.
Eigen::VectorXd diagonal_ensemble(const Eigen::MatrixXd& v, Eigen::Index s) {
    const Eigen::VectorXd weights = v.row(s).transpose().cwiseAbs2();
    return v.cwiseAbs2() * weights;
}

void finish_point(PopulationTrajectory& traj, std::size_t k, const Envelope& env) {
    traj.survival[k] = env.survival;
    if (traj.background) (*traj.background)[k] = 1.0 - env.survival;
}

}  // namespace

void DecoherenceParams::validate() const {
    if (survival_time_us && !(*survival_time_us > 0.0 && std::isfinite(*survival_time_us))) {
        throw SpecError("decoherence.survival_time_us must be positive");
    }
    if (dephasing_time_us && !(*dephasing_time_us > 0.0 && std::isfinite(*dephasing_time_us))) {
        throw SpecError("decoherence.dephasing_time_us must be positive");
    }
}

std::vector<double> PopulationTrajectory::site_series(std::size_t site) const {
    const auto col = populations.col(static_cast<Eigen::Index>(site));
    return {col.begin(), col.end()};
}

double phase_radians(double frequency_khz, double time_us) noexcept {
    return 2.0 * std::numbers::pi * frequency_khz * time_us * 1e-3;
}

std::vector<double> uniform_grid(double t_max_us, std::size_t samples) {
    if (!(t_max_us > 0.0) || samples < 2) {
        throw SpecError("uniform_grid: need t_max > 0 and at least 2 samples");
    }
    std::vector<double> grid(samples);
    const double step = t_max_us / static_cast<double>(samples - 1);
    for (std::size_t i = 0; i < samples; ++i) grid[i] = step * static_cast<double>(i);
    grid.back() = t_max_us;
    return grid;
}

std::vector<double> anti_alias_grid(const DressedSpectrum& spectrum, double t_max_us,
                                    std::size_t min_samples) {
    const auto& w = spectrum.eigenvalues;
    const double max_gap_khz = w.empty() ? 0.0 : w.back() - w.front();
    const double periods = max_gap_khz * 1e-3 * t_max_us;
    const auto needed = static_cast<std::size_t>(std::ceil(20.0 * periods)) + 1;
    return uniform_grid(t_max_us, std::max({needed, min_samples, std::size_t{2}}));
}

std::vector<double> closed_populations(const DressedSpectrum& spectrum, std::size_t initial_site,
                                       double time_us) {
    if (initial_site >= spectrum.dim()) {
        throw SpecError("closed_populations: initial site out of range");
    }
    const auto& v = spectrum.eigenvectors;
    const auto n = v.rows();
    const auto s = static_cast<Eigen::Index>(initial_site);
    Eigen::VectorXcd dressed(n);
    for (Eigen::Index a = 0; a < n; ++a) {
        const double phi = phase_radians(spectrum.eigenvalues[static_cast<std::size_t>(a)], time_us);
        dressed(a) = v(s, a) * std::polar(1.0, -phi);
    }
    const Eigen::VectorXcd bare = v * dressed;
    std::vector<double> out(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::norm(bare(i));
    return out;
}

PopulationTrajectory evolve(const DressedSpectrum& spectrum, std::size_t initial_site,
                            const std::vector<double>& times_us, const DecoherenceParams& dec) {
    check_inputs(spectrum, initial_site, times_us);
    dec.validate();

    const auto& v = spectrum.eigenvectors;
    const Eigen::Index n = v.rows();
    const auto s = static_cast<Eigen::Index>(initial_site);
    const Eigen::VectorXd diag = diagonal_ensemble(v, s);
    const Eigen::VectorXd start = v.row(s).transpose();

    PopulationTrajectory traj = allocate(spectrum.dim(), times_us, dec);
    const auto count = static_cast<std::ptrdiff_t>(times_us.size());

#pragma omp parallel
    {
        Eigen::VectorXcd dressed(n);
        Eigen::VectorXcd bare(n);
#pragma omp for schedule(static)
        for (std::ptrdiff_t k = 0; k < count; ++k) {
            const double t = times_us[static_cast<std::size_t>(k)];
            for (Eigen::Index a = 0; a < n; ++a) {
                const double phi = phase_radians(spectrum.eigenvalues[static_cast<std::size_t>(a)], t);
                dressed(a) = start(a) * std::polar(1.0, -phi);
            }
            bare.noalias() = v * dressed;
            const Envelope env = envelope_at(dec, t);
            for (Eigen::Index i = 0; i < n; ++i) {
                const double p = env.coherence * std::norm(bare(i)) + (1.0 - env.coherence) * diag(i);
                traj.populations(k, i) = std::clamp(env.survival * p, 0.0, 1.0);
            }
            finish_point(traj, static_cast<std::size_t>(k), env);
        }
    }
    return traj;
}

PopulationTrajectory evolve_serial(const DressedSpectrum& spectrum, std::size_t initial_site,
                                   const std::vector<double>& times_us,
                                   const DecoherenceParams& dec) {
    check_inputs(spectrum, initial_site, times_us);
    dec.validate();

    const auto& v = spectrum.eigenvectors;
    const auto& w = spectrum.eigenvalues;
    const Eigen::Index n = v.rows();
    const auto s = static_cast<Eigen::Index>(initial_site);

    PopulationTrajectory traj = allocate(spectrum.dim(), times_us, dec);
    for (std::size_t k = 0; k < times_us.size(); ++k) {
        const double t = times_us[k];
        const Envelope env = envelope_at(dec, t);
        for (Eigen::Index target = 0; target < n; ++target) {
            double p = 0.0;
            for (Eigen::Index a = 0; a < n; ++a) {
                for (Eigen::Index b = 0; b < n; ++b) {
                    const double weight = v(s, a) * v(target, a) * v(target, b) * v(s, b);
                    const double damping = a == b ? 1.0 : env.coherence;
                    p += weight * damping *
                         std::cos(phase_radians(w[static_cast<std::size_t>(a)] - w[static_cast<std::size_t>(b)], t));
                }
            }
            traj.populations(static_cast<Eigen::Index>(k), target) = std::clamp(env.survival * p, 0.0, 1.0);
        }
        finish_point(traj, k, env);
    }
    return traj;
}

PopulationTrajectory fractionalize(const PopulationTrajectory& traj) {
    if (traj.normalized) return traj;
    PopulationTrajectory out = traj;
    for (std::size_t k = 0; k < traj.survival.size(); ++k) {
        const double s = traj.survival[k];
        if (!(s > 0.0)) {
            throw NumericError("fractionalize: zero survival at t = " + std::to_string(traj.times_us[k]) + " us");
        }
        out.populations.row(static_cast<Eigen::Index>(k)) /= s;
    }
    out.normalized = true;
    return out;
}

}  // namespace rydssh
