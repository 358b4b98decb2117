// Acceptance suite: one PASS/FAIL line per criterion, exit status = number of failures.

#include "rydssh/analysis.hpp"
#include "rydssh/config.hpp"
#include "rydssh/dynamics.hpp"
#include "rydssh/lattice.hpp"
#include "rydssh/run.hpp"
#include "rydssh/sfi.hpp"
#include "rydssh/spectral.hpp"

#include "oracles/jacobi_eigen.hpp"
#include "oracles/random_lattice.hpp"
#include "oracles/rk4.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace rydssh;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> check;
};

const LatticeSpec kSix = make_ssh_chain(58, 6, 160.0, 800.0);
const LatticeSpec kFour = make_ssh_chain(60, 4, 160.0, 800.0);

DressedSpectrum spectrum_of(const LatticeSpec& spec) { return diagonalize(build_hamiltonian(spec)); }

double max_over(const PopulationTrajectory& t, const std::function<double(Eigen::Index)>& f) {
    double best = -INFINITY;
    for (Eigen::Index k = 0; k < t.populations.rows(); ++k) best = std::max(best, f(k));
    return best;
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

Outcome hamiltonian_construction() {
    const auto h = build_hamiltonian(kSix);
    const bool ok = h.off_diagonal() == std::vector<double>{80, 400, 80, 400, 80} &&
                    h.diagonal() == std::vector<double>(6, 0.0);
    const auto d = h.dense();
    bool tridiagonal = true;
    for (Eigen::Index i = 0; i < 6; ++i)
        for (Eigen::Index j = 0; j < 6; ++j)
            if (std::abs(i - j) > 1 && d(i, j) != 0.0) tridiagonal = false;
    return {ok && tridiagonal, "off-diagonal [80,400,80,400,80] kHz, zero diagonal, exact"};
}

Outcome propagator_oracle() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240611);
    const auto grid = uniform_grid(100.0, 201);
    double worst = 0.0;
    constexpr int kLattices = 12;
    for (int trial = 0; trial < kLattices; ++trial) {
        const auto spec = oracle::random_lattice(rng);
        const auto h = build_hamiltonian(spec);
        const std::size_t init = static_cast<std::size_t>(trial) % spec.size();
        const auto spectral = evolve(diagonalize(h), init, grid);
        const auto ref = oracle::rk4_populations({h.diagonal(), h.off_diagonal()}, init, grid);
        for (std::size_t k = 0; k < grid.size(); ++k)
            for (std::size_t i = 0; i < spec.size(); ++i)
                worst = std::max(worst, std::abs(spectral.populations(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) - ref[k][i]));
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {worst < 1e-6 && seconds < 10.0,
            fmt::format("{} lattices, max |dP| = {:.2e} (< 1e-6), {:.2f} s (< 10 s)", kLattices, worst, seconds)};
}

Outcome chiral_suite() {
    std::mt19937_64 rng(77);
    oracle::LatticeRanges chiral;
    chiral.zero_detuning = true;
    chiral.sizes = {2, 4, 6, 8, 10, 12};
    double pair_err = 0.0, gamma_err = 0.0, unitarity_err = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto h = build_hamiltonian(oracle::random_lattice(rng, chiral));
        const auto s = diagonalize(h);
        const std::size_t m = s.dim();
        const Eigen::MatrixXd dense = h.dense();
        Eigen::VectorXd gamma(static_cast<Eigen::Index>(m));
        for (Eigen::Index i = 0; i < gamma.size(); ++i) gamma(i) = i % 2 == 0 ? 1.0 : -1.0;
        for (std::size_t k = 0; k < m; ++k) {
            pair_err = std::max(pair_err, std::abs(s.eigenvalues[k] + s.eigenvalues[m - 1 - k]));
            const Eigen::VectorXd gv = gamma.cwiseProduct(s.eigenvectors.col(static_cast<Eigen::Index>(k)));
            gamma_err = std::max(gamma_err, (dense * gv + s.eigenvalues[k] * gv).cwiseAbs().maxCoeff());
        }
    }
    const auto grid = uniform_grid(100.0, 1001);
    for (int trial = 0; trial < 20; ++trial) {
        const auto spec = oracle::random_lattice(rng);
        const auto traj = evolve(spectrum_of(spec), 0, grid);
        for (Eigen::Index k = 0; k < traj.populations.rows(); ++k)
            unitarity_err = std::max(unitarity_err, std::abs(traj.populations.row(k).sum() - 1.0));
    }
    return {pair_err < 1e-8 && gamma_err < 1e-8 && unitarity_err < 1e-9,
            fmt::format("pairing {:.1e}, Gamma-conjugation residual {:.1e} (< 1e-8 kHz); |sum P - 1| {:.1e} (< 1e-9)",
                        pair_err, gamma_err, unitarity_err)};
}

Outcome splitting_and_scaling() {
    const double six = edge_splitting(spectrum_of(kSix));
    const auto ref = oracle::jacobi_eigen(build_hamiltonian(kSix).dense());
    const double oracle_six = ref.values[3] - ref.values[2];
    const double perturbative = 160.0 * std::pow(160.0 / 800.0, 2);
    const double four = edge_splitting(spectrum_of(kFour));
    const double ratio = four / six;
    const bool ok = std::abs(six - oracle_six) < 1e-8 && std::abs(six - perturbative) / perturbative < 0.15 &&
                    std::abs(ratio - 5.0) / 5.0 < 0.15;
    return {ok, fmt::format("6-site {:.6f} kHz (oracle diff {:.1e}), {:+.1f}% vs 6.4 kHz; 4/6 ratio {:.4f} vs 5",
                            six, std::abs(six - oracle_six), 100.0 * (six - perturbative) / perturbative, ratio)};
}

Outcome edge_tunneling() {
    const auto s = spectrum_of(kSix);
    const double half = 0.5 / (edge_splitting(s) * 1e-3);
    const auto grid = uniform_grid(2.0 * half, 20001);
    const auto traj = evolve(s, 0, grid);
    double far = 0.0, t_far = 0.0, bulk = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto r = static_cast<Eigen::Index>(k);
        if (std::abs(grid[k] - half) <= 0.05 * half && traj.populations(r, 5) > far) {
            far = traj.populations(r, 5);
            t_far = grid[k];
        }
        for (Eigen::Index i = 1; i <= 4; ++i) bulk = std::max(bulk, traj.populations(r, i));
    }
    // Cross-check the peak against direct integration.
    const auto h = build_hamiltonian(kSix);
    const auto rk = oracle::rk4_populations({h.diagonal(), h.off_diagonal()}, 0, {t_far});
    const double oracle_gap = std::abs(rk[0][5] - far);

    const auto early = evolve(s, 0, uniform_grid(5.0, 2001));
    const double corr = correlation(early.site_series(0), early.site_series(2));
    const bool ok = far > 0.9 && bulk < 0.15 && oracle_gap < 1e-6 && corr < -0.5;
    return {ok, fmt::format("P63 = {:.4f} at t = {:.2f} us (1/(2 D34) = {:.2f} us, window +-5%), RK4 diff {:.1e}; "
                            "max bulk {:.4f} (< 0.15); corr(P58, P60) over 5 us = {:.3f} (< -0.5)",
                            far, t_far, half, oracle_gap, bulk, corr)};
}

Outcome resonance_width() {
    std::vector<double> detunings;
    for (int i = -80; i <= 80; ++i) detunings.push_back(0.25 * i);
    const auto transfer = edge_transfer_resonance(kSix, 0, detunings).column("max_far_edge_population");
    const double fwhm = full_width_half_max(detunings, transfer);
    const bool ok = fwhm >= 2.5 && fwhm <= 10.0;
    return {ok, fmt::format("FWHM = {:.3f} kHz of bond-0 detuning; required within x2 of 5 kHz, i.e. [2.5, 10]", fwhm)};
}

Outcome bulk_dynamics() {
    const auto s = spectrum_of(kSix);
    const auto grid = uniform_grid(200.0, 40001);
    DecoherenceParams dephased;
    dephased.dephasing_time_us = 30.0;
    auto edge_sum = [](const PopulationTrajectory& t) {
        return max_over(t, [&](Eigen::Index k) { return t.populations(k, 0) + t.populations(k, 5); });
    };
    const auto closed = evolve(s, 1, grid);
    const auto open = evolve(s, 1, grid, dephased);
    const double edge_closed = edge_sum(closed);
    const double edge_open = edge_sum(open);
    double first_cross = -1.0;
    for (Eigen::Index k = 0; k < closed.populations.rows() && first_cross < 0; ++k) {
        if (closed.populations(k, 0) + closed.populations(k, 5) >= 0.05) first_cross = grid[static_cast<std::size_t>(k)];
    }
    double pair = 0.0;
    for (std::size_t k = 0; k < grid.size() && grid[k] <= 8.0; ++k) {
        if (grid[k] >= 6.0) pair = std::max(pair, closed.populations(static_cast<Eigen::Index>(k), 2) +
                                                      closed.populations(static_cast<Eigen::Index>(k), 3));
    }
    const bool ok = edge_closed < 0.05 && edge_open < 0.05 && pair > 0.7;
    std::string detail = fmt::format("max P58+P63 over 0-200 us: closed {:.4f}, dephased(30 us) {:.4f} (< 0.05); "
                                     "max P60+P61 in [6, 8] us {:.4f} (> 0.7)",
                                     edge_closed, edge_open, pair);
    if (first_cross >= 0) detail += fmt::format("; closed system first reaches 0.05 at t = {:.2f} us", first_cross);
    return {ok, detail};
}

Outcome protection_breakdown() {
    std::vector<double> detunings;
    for (int d = 0; d <= 800; d += 10) detunings.push_back(d);
    const auto sweep = sweep_protection_breakdown(kSix, 0, detunings, 2.5);
    const auto p58 = sweep.column("p_58"), p59 = sweep.column("p_59"), p60 = sweep.column("p_60"),
               p63 = sweep.column("p_63");
    const auto& zero = sweep.observables.front();
    const bool p58_max = *std::max_element(zero.begin(), zero.end()) == p58.front();
    const std::size_t at400 = 40;
    const double far = *std::max_element(p63.begin(), p63.end());
    std::size_t crossover = 0;
    while (crossover < detunings.size() && p59[crossover] + p60[crossover] <= p58[crossover]) ++crossover;
    const bool ok = p58_max && p59[at400] + p60[at400] > p58[at400] && far < 0.1;
    return {ok, fmt::format("zero detuning P58 = {:.4f} (max); at 400 kHz P59+P60 = {:.4f} vs P58 = {:.4f}; "
                            "crossover at {} kHz; max P63 = {:.4f} (< 0.1)",
                            p58.front(), p59[at400] + p60[at400], p58[at400],
                            crossover < detunings.size() ? detunings[crossover] : NAN, far)};
}

Outcome decay_bookkeeping() {
    DecoherenceParams dec;
    dec.survival_time_us = 70.0;
    const auto traj = evolve(spectrum_of(kSix), 1, uniform_grid(70.0, 701), dec);
    const auto frac = fractionalize(traj);
    double sum_err = 0.0;
    for (Eigen::Index k = 0; k < frac.populations.rows(); ++k)
        sum_err = std::max(sum_err, std::abs(frac.populations.row(k).sum() - 1.0));
    const double err = std::abs(traj.survival.back() - std::exp(-1.0));
    return {err < 1e-9 && sum_err < 1e-9,
            fmt::format("survival(70 us) - 1/e = {:.1e} (< 1e-9); fractional |sum - 1| = {:.1e}", err, sum_err)};
}

Outcome sfi_pipeline() {
    const double f58 = ionization_field(58);
    const RampParams ramp;
    bool decreasing = true;
    for (int n = 59; n <= 63; ++n) {
        decreasing = decreasing && ionization_time(ionization_field(n), ramp) < ionization_time(ionization_field(n - 1), ramp);
    }
    const auto grid = uniform_grid(15.0, 1501);
    std::vector<SFITrace> basis;
    for (int n = 58; n <= 63; ++n) basis.push_back(synthesize_trace(n, ramp, 0.3, grid));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double round_trip = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> p(6);
        double total = 0.0;
        for (auto& x : p) total += (x = u(rng));
        for (auto& x : p) x /= total;
        const auto fit = unmix(mix_traces(basis, p), basis);
        for (std::size_t i = 0; i < 6; ++i) round_trip = std::max(round_trip, std::abs(fit.raw[i] - p[i]));
    }

    double end_to_end = 0.0;
    const auto traj = evolve(spectrum_of(kSix), 1, uniform_grid(20.0, 41));
    for (Eigen::Index k = 0; k < traj.populations.rows(); ++k) {
        std::vector<double> p(traj.populations.row(k).begin(), traj.populations.row(k).end());
        const auto fit = unmix(mix_traces(basis, p), basis);
        for (std::size_t i = 0; i < 6; ++i) end_to_end = std::max(end_to_end, std::abs(fit.raw[i] - p[i]));
    }
    const bool ok = std::abs(f58 - 36.1) < 0.05 && f58 < 40.0 && decreasing && round_trip < 1e-6 && end_to_end < 1e-4;
    return {ok, fmt::format("field(58) = {:.3f} V/cm (< 40); times decrease with n: {}; round trip {:.1e} (< 1e-6); "
                            "evolve->trace->unmix {:.1e} (< 1e-4)",
                            f58, decreasing ? "yes" : "no", round_trip, end_to_end)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    const fs::path dir = RYDSSH_CONFIG_DIR;
    const fs::path scratch = fs::temp_directory_path() / "rydssh_acceptance";
    std::size_t files = 0;
    bool identical = true;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".json") continue;
        const auto config = load_config(entry.path());
        fs::remove_all(scratch);
        const auto first = run(config, {scratch / "a", 0});
        run(config, {scratch / "b", 0});
        for (const auto& f : first.files) {
            ++files;
            identical = identical && slurp(f) == slurp(scratch / "b" / f.filename());
        }
    }
    fs::remove_all(scratch);
    return {identical && files > 0, fmt::format("{} output files compared byte-for-byte", files)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "Hamiltonian construction", hamiltonian_construction},
        {2, "Propagator vs RK4 oracle", propagator_oracle},
        {3, "Chiral symmetry and unitarity", chiral_suite},
        {4, "Edge splitting and size scaling", splitting_and_scaling},
        {5, "Edge-to-edge tunneling", edge_tunneling},
        {6, "Tunneling resonance width", resonance_width},
        {7, "Bulk dynamics and edge protection", bulk_dynamics},
        {8, "Protection breakdown", protection_breakdown},
        {9, "Decay bookkeeping", decay_bookkeeping},
        {10, "SFI pipeline", sfi_pipeline},
        {11, "Determinism of bundled configs", determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        fmt::print("[{}] {:2d}. {}: {}\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail);
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
    return failures;
}
