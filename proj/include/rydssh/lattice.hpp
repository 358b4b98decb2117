// lattice.hpp - declarative SSH chain description and its tridiagonal Hamiltonian
#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace rydssh {

// Sites are Rydberg levels labelled by principal quantum number. Frequencies are
// ordinary frequencies in kHz; the 2*pi only appears inside the propagator.
struct LatticeSpec {
    std::vector<int> site_labels;
    std::vector<double> couplings_khz;       // Rabi frequency of bond (n, n+1)
    std::vector<double> bond_detunings_khz;  // detuning of transition (n, n+1), 0 = resonant

    std::size_t size() const noexcept { return site_labels.size(); }

    // Throws SpecError on length mismatch, M < 2, non-increasing labels or non-finite values.
    void validate() const;

    // Index of the site with the given label; throws SpecError if absent.
    std::size_t index_of(int label) const;

    // End-for-end mirror: reversed sites and couplings. Detunings are negated so the
    // mirrored diagonal equals the original one up to a constant shift.
    LatticeSpec reversed() const;
};

// Alternating weak/strong chain starting with the weak bond at the first site, as in
// the six-level 58s..63s lattice. Detunings are zero.
LatticeSpec make_ssh_chain(int first_label, std::size_t sites, double omega_weak_khz,
                           double omega_strong_khz);

// Real symmetric tridiagonal matrix in kHz. Stored as its two bands, so the
// tridiagonal invariant holds by construction.
class HamiltonianMatrix {
public:
    HamiltonianMatrix(std::vector<double> diagonal, std::vector<double> off_diagonal);

    std::size_t dim() const noexcept { return diagonal_.size(); }
    const std::vector<double>& diagonal() const noexcept { return diagonal_; }
    const std::vector<double>& off_diagonal() const noexcept { return off_diagonal_; }

    double operator()(std::size_t i, std::size_t j) const noexcept;
    Eigen::MatrixXd dense() const;

    bool operator==(const HamiltonianMatrix&) const = default;

private:
    std::vector<double> diagonal_;
    std::vector<double> off_diagonal_;
};

// Off-diagonal (n, n+1) = coupling/2, U_0 = 0, U_{k+1} = U_k + detuning_{k,k+1}.
HamiltonianMatrix build_hamiltonian(const LatticeSpec& spec);

}  // namespace rydssh
