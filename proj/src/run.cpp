#include "rydssh/run.hpp"

#include "rydssh/analysis.hpp"
#include "rydssh/csv.hpp"
#include "rydssh/dynamics.hpp"
#include "rydssh/errors.hpp"
#include "rydssh/sfi.hpp"
#include "rydssh/spectral.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

namespace rydssh {

namespace fs = std::filesystem;

namespace {

class Writer {
public:
    Writer(fs::path dir, std::string stem, RunSummary& summary)
        : dir_(std::move(dir)), stem_(std::move(stem)), summary_(summary) {}

    void write(const std::string& suffix, const std::string& content) {
        const fs::path path = dir_ / (stem_ + "_" + suffix);
        csv::write_file_atomic(path, content);
        summary_.files.push_back(path);
    }

private:
    fs::path dir_;
    std::string stem_;
    RunSummary& summary_;
};

std::vector<double> time_grid(const TimeConfig& t, const DressedSpectrum& spectrum) {
    if (t.grid_us) return *t.grid_us;
    if (t.samples) return uniform_grid(*t.t_max_us, *t.samples);
    return anti_alias_grid(spectrum, *t.t_max_us);
}

void add_splitting_if_even(const DressedSpectrum& spectrum, RunSummary& summary) {
    if (spectrum.dim() % 2 == 0) summary.scalars["edge_splitting_khz"] = edge_splitting(spectrum);
}

void run_evolve(const RunConfig& c, Writer& out, RunSummary& summary) {
    const LatticeSpec& lattice = *c.lattice;
    const auto spectrum = diagonalize(build_hamiltonian(lattice));
    const auto grid = time_grid(*c.time, spectrum);
    auto traj = evolve(spectrum, lattice.index_of(*c.initial_site), grid, c.decoherence);
    summary.scalars["survival_at_t_max"] = traj.survival.back();
    add_splitting_if_even(spectrum, summary);
    if (c.fractional) traj = fractionalize(traj);
    out.write("trajectory.csv", csv::trajectory(traj, lattice.site_labels));
    if (c.output.long_format) out.write("trajectory_long.csv", csv::trajectory_long(traj, lattice.site_labels));
}

void run_edge_detuning(const RunConfig& c, Writer& out, RunSummary& summary) {
    const auto& s = *c.sweep;
    SweepResult result = sweep_edge_detuning(*c.lattice, *s.bond_index, s.values);
    const auto splitting = result.column("splitting_khz");
    const auto min_it = std::min_element(splitting.begin(), splitting.end());
    summary.scalars["min_splitting_khz"] = *min_it;
    summary.scalars["detuning_at_min_khz"] = result.parameter_values[static_cast<std::size_t>(min_it - splitting.begin())];
    LatticeSpec resonant = *c.lattice;
    std::fill(resonant.bond_detunings_khz.begin(), resonant.bond_detunings_khz.end(), 0.0);
    add_splitting_if_even(diagonalize(build_hamiltonian(resonant)), summary);

    if (s.transfer_resonance) {
        const auto transfer = edge_transfer_resonance(*c.lattice, *s.bond_index, s.values, s.transfer_window_us);
        const auto column = transfer.column("max_far_edge_population");
        result.observable_names.push_back("max_far_edge_population");
        for (std::size_t i = 0; i < column.size(); ++i) result.observables[i].push_back(column[i]);
        summary.scalars["fwhm_khz"] = full_width_half_max(result.parameter_values, column);
    }
    out.write("sweep.csv", csv::sweep(result));
    if (c.output.long_format) out.write("sweep_long.csv", csv::sweep_long(result));
}

void run_protection(const RunConfig& c, Writer& out, RunSummary& summary) {
    const auto& s = *c.sweep;
    const auto result = sweep_protection_breakdown(*c.lattice, *s.bond_index, s.values, s.probe_time_us, c.decoherence);
    summary.scalars["probe_time_us"] = s.probe_time_us;
    out.write("sweep.csv", csv::sweep(result));
    if (c.output.long_format) out.write("sweep_long.csv", csv::sweep_long(result));
}

void run_size_scaling(const RunConfig& c, Writer& out, RunSummary& summary) {
    const auto& s = *c.sweep;
    const auto result = splitting_vs_size(*s.omega_weak_khz, *s.omega_strong_khz, s.sizes);
    if (result.parameter_values.size() >= 2) {
        summary.scalars["log_slope_per_cell"] = log_splitting_slope(result);
        summary.scalars["expected_log_slope"] = std::log(*s.omega_weak_khz / *s.omega_strong_khz);
    }
    out.write("sweep.csv", csv::sweep(result));
    if (c.output.long_format) out.write("sweep_long.csv", csv::sweep_long(result));
}

void run_dressed_scan(const RunConfig& c, Writer& out, RunSummary& summary) {
    const auto& s = *c.sweep;
    const auto result = dressed_energy_scan(*s.omega_weak_khz, s.ratios, *s.size);
    summary.scalars["ratio_count"] = static_cast<double>(result.parameter_values.size());
    out.write("sweep.csv", csv::sweep(result));
    if (c.output.long_format) out.write("sweep_long.csv", csv::sweep_long(result));
}

void run_sfi_pipeline(const RunConfig& c, const RunOptions& options, Writer& out, RunSummary& summary) {
    const LatticeSpec& lattice = *c.lattice;
    const auto spectrum = diagonalize(build_hamiltonian(lattice));
    const auto grid = time_grid(*c.time, spectrum);
    const auto traj = evolve(spectrum, lattice.index_of(*c.initial_site), grid, c.decoherence);
    const auto last = static_cast<Eigen::Index>(grid.size() - 1);
    std::vector<double> populations(traj.populations.row(last).begin(), traj.populations.row(last).end());

    std::vector<SFITrace> basis;
    if (c.sfi.basis_dir) {
        basis = csv::load_basis_directory(*c.sfi.basis_dir);
        if (basis.size() != lattice.size()) throw ConfigError("sfi.basis_dir: need one trace per lattice site");
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (*basis[i].label != lattice.site_labels[i]) throw ConfigError("sfi.basis_dir: labels do not match the lattice");
        }
    } else {
        const auto sfi_grid = uniform_grid(c.sfi.window_us, c.sfi.samples);
        for (int n : lattice.site_labels) {
            basis.push_back(synthesize_trace(n, c.sfi.ramp, c.sfi.width_us, sfi_grid, c.sfi.quantum_defect));
        }
    }

    std::vector<SFITrace> components = basis;
    std::vector<double> weights = populations;
    std::optional<SFITrace> background;
    if (traj.background) {
        background = background_trace(basis.front().times_us);
        components.push_back(*background);
        weights.push_back(traj.background->back());
    }
    SFITrace observed = mix_traces(components, weights);

    if (c.sfi.noise_fraction > 0.0) {
        std::mt19937_64 rng(options.seed);
        const double peak = *std::max_element(observed.signal.begin(), observed.signal.end());
        std::normal_distribution<double> noise(0.0, c.sfi.noise_fraction * peak);
        for (double& v : observed.signal) v += noise(rng);
    }

    const auto fit = unmix(observed, basis, background);
    double max_err = 0.0;
    SweepResult table{"site_label", "", {}, {"true_population", "recovered_population", "recovered_fraction"}, {}};
    double total = 0.0;
    for (double p : populations) total += p;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        table.parameter_values.push_back(static_cast<double>(lattice.site_labels[i]));
        table.observables.push_back({populations[i], fit.raw[i], fit.normalized[i]});
        max_err = std::max(max_err, std::abs(fit.raw[i] - populations[i]));
    }
    summary.scalars["max_population_error"] = max_err;
    summary.scalars["survival_at_t_max"] = traj.survival.back();
    summary.scalars["residual_norm"] = fit.residual_norm;
    if (fit.background) summary.scalars["background_coefficient"] = *fit.background;
    out.write("sfi_trace.csv", csv::trace(observed));
    out.write("unmix.csv", csv::sweep(table));
}

}  // namespace

fs::path resolve_output_dir(const RunConfig& config, const RunOptions& options) {
    if (options.out_dir) return *options.out_dir;
    if (config.output.dir) return *config.output.dir;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return ".";
}

RunSummary run(const RunConfig& config, const RunOptions& options) {
    validate_config(config);
    RunSummary summary;
    summary.experiment = to_string(config.experiment);
    Writer out(resolve_output_dir(config, options), config.output.stem, summary);

    switch (config.experiment) {
        case Experiment::evolve: run_evolve(config, out, summary); break;
        case Experiment::sweep_edge_detuning: run_edge_detuning(config, out, summary); break;
        case Experiment::sweep_protection: run_protection(config, out, summary); break;
        case Experiment::splitting_vs_size: run_size_scaling(config, out, summary); break;
        case Experiment::dressed_scan: run_dressed_scan(config, out, summary); break;
        case Experiment::sfi_pipeline: run_sfi_pipeline(config, options, out, summary); break;
    }

    nlohmann::ordered_json j;
    j["experiment"] = summary.experiment;
    for (const auto& [key, value] : summary.scalars) j["scalars"][key] = std::stod(csv::format_number(value));
    for (const auto& f : summary.files) j["files"].push_back(f.filename().string());
    out.write("summary.json", j.dump(2) + "\n");
    return summary;
}

}  // namespace rydssh
