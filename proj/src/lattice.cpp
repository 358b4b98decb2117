#include "rydssh/lattice.hpp"

#include "rydssh/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rydssh {

namespace {

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void LatticeSpec::validate() const {
    const std::size_t m = site_labels.size();
    if (m < 2) {
        throw SpecError("lattice needs at least 2 sites, got " + std::to_string(m));
    }
    if (couplings_khz.size() != m - 1) {
        throw SpecError("lattice.couplings_khz: expected " + std::to_string(m - 1) +
                        " entries, got " + std::to_string(couplings_khz.size()));
    }
    if (bond_detunings_khz.size() != m - 1) {
        throw SpecError("lattice.bond_detunings_khz: expected " + std::to_string(m - 1) +
                        " entries, got " + std::to_string(bond_detunings_khz.size()));
    }
    for (std::size_t i = 1; i < m; ++i) {
        if (site_labels[i] <= site_labels[i - 1]) {
            throw SpecError("lattice.site_labels must be strictly increasing");
        }
    }
    if (!all_finite(couplings_khz) || !all_finite(bond_detunings_khz)) {
        throw SpecError("lattice couplings and detunings must be finite");
    }
}

std::size_t LatticeSpec::index_of(int label) const {
    auto it = std::find(site_labels.begin(), site_labels.end(), label);
    if (it == site_labels.end()) {
        throw SpecError("site label " + std::to_string(label) + " is not in the lattice");
    }
    return static_cast<std::size_t>(it - site_labels.begin());
}

LatticeSpec LatticeSpec::reversed() const {
    LatticeSpec out;
    out.site_labels = site_labels;  // labels stay increasing; only the physics is mirrored
    out.couplings_khz.assign(couplings_khz.rbegin(), couplings_khz.rend());
    out.bond_detunings_khz.reserve(bond_detunings_khz.size());
    for (auto it = bond_detunings_khz.rbegin(); it != bond_detunings_khz.rend(); ++it) {
        out.bond_detunings_khz.push_back(-*it);
    }
    return out;
}

LatticeSpec make_ssh_chain(int first_label, std::size_t sites, double omega_weak_khz,
                           double omega_strong_khz) {
    if (sites < 2) {
        throw SpecError("SSH chain needs at least 2 sites");
    }
    LatticeSpec spec;
    for (std::size_t i = 0; i < sites; ++i) {
        spec.site_labels.push_back(first_label + static_cast<int>(i));
    }
    for (std::size_t i = 0; i + 1 < sites; ++i) {
        spec.couplings_khz.push_back(i % 2 == 0 ? omega_weak_khz : omega_strong_khz);
    }
    spec.bond_detunings_khz.assign(sites - 1, 0.0);
    return spec;
}

HamiltonianMatrix::HamiltonianMatrix(std::vector<double> diagonal, std::vector<double> off_diagonal)
    : diagonal_(std::move(diagonal)), off_diagonal_(std::move(off_diagonal)) {
    if (diagonal_.empty() || off_diagonal_.size() + 1 != diagonal_.size()) {
        throw SpecError("tridiagonal bands have inconsistent lengths");
    }
}

double HamiltonianMatrix::operator()(std::size_t i, std::size_t j) const noexcept {
    if (i == j) return diagonal_[i];
    if (i + 1 == j) return off_diagonal_[i];
    if (j + 1 == i) return off_diagonal_[j];
    return 0.0;
}

Eigen::MatrixXd HamiltonianMatrix::dense() const {
    const auto n = static_cast<Eigen::Index>(dim());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        h(i, i) = diagonal_[static_cast<std::size_t>(i)];
        if (i + 1 < n) {
            h(i, i + 1) = h(i + 1, i) = off_diagonal_[static_cast<std::size_t>(i)];
        }
    }
    return h;
}

HamiltonianMatrix build_hamiltonian(const LatticeSpec& spec) {
    spec.validate();
    const std::size_t m = spec.size();
    std::vector<double> diag(m, 0.0);
    std::vector<double> off(m - 1);
    for (std::size_t k = 0; k + 1 < m; ++k) {
        diag[k + 1] = diag[k] + spec.bond_detunings_khz[k];
        off[k] = 0.5 * spec.couplings_khz[k];
    }
    return HamiltonianMatrix(std::move(diag), std::move(off));
}

}  // namespace rydssh
