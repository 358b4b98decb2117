// spectral.hpp - dressed states of the chain Hamiltonian
#pragma once

#include "rydssh/lattice.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace rydssh {

// Eigenpairs of a HamiltonianMatrix. Eigenvalues ascending (kHz); column a of
// `eigenvectors` pairs with eigenvalues[a] and has its largest-magnitude component
// positive. Entry (site, a) is the real amplitude <a|site>.
struct DressedSpectrum {
    std::vector<double> eigenvalues;
    Eigen::MatrixXd eigenvectors;

    std::size_t dim() const noexcept { return eigenvalues.size(); }
};

// Implicit-shift QL on the tridiagonal bands. Exactly degenerate eigenvalues are
// ordered by the row index of their largest-magnitude component.
DressedSpectrum diagonalize(const HamiltonianMatrix& h);

// Bare site expressed in the dressed basis: row `site_index` of the eigenvector matrix.
std::vector<double> project_bare(const DressedSpectrum& spectrum, std::size_t site_index);

// Gap straddling zero for an even chain: w[M/2] - w[M/2 - 1] (0-based).
double edge_splitting(const DressedSpectrum& spectrum);

}  // namespace rydssh
