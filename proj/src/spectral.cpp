#include "rydssh/spectral.hpp"

#include "rydssh/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace rydssh {

namespace {

constexpr int kMaxQlIterations = 60;

// In-place tql2 (Bowdler, Martin, Reinsch, Wilkinson). `d` holds the diagonal, `e`
// the sub-diagonal in e[0..n-2]; `z` starts as identity and accumulates rotations.
void tql2(std::vector<double>& d, std::vector<double>& e, Eigen::MatrixXd& z) {
    const std::size_t n = d.size();
    e.resize(n, 0.0);
    e[n - 1] = 0.0;

    double f = 0.0;
    double tst1 = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();

    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n - 1 && std::abs(e[m]) > eps * tst1) {
            ++m;
        }

        if (m > l) {
            int iter = 0;
            do {
                if (++iter > kMaxQlIterations) {
                    throw NumericError("tql2: no convergence");
                }
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t ii = m; ii-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[ii];
                    h = c * p;
                    r = std::hypot(p, e[ii]);
                    e[ii + 1] = s * r;
                    s = e[ii] / r;
                    c = p / r;
                    p = c * d[ii] - s * g;
                    d[ii + 1] = h + s * (c * g + s * d[ii]);

                    const auto col = static_cast<Eigen::Index>(ii);
                    for (Eigen::Index k = 0; k < z.rows(); ++k) {
                        h = z(k, col + 1);
                        z(k, col + 1) = s * z(k, col) + c * h;
                        z(k, col) = c * z(k, col) - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

Eigen::Index dominant_row(const Eigen::VectorXd& v) {
    Eigen::Index best = 0;
    v.cwiseAbs().maxCoeff(&best);
    return best;
}

}  // namespace

DressedSpectrum diagonalize(const HamiltonianMatrix& h) {
    const std::size_t n = h.dim();
    std::vector<double> d = h.diagonal();
    std::vector<double> e = h.off_diagonal();
    for (double x : d) {
        if (!std::isfinite(x)) throw NumericError("diagonalize: non-finite diagonal entry");
    }
    for (double x : e) {
        if (!std::isfinite(x)) throw NumericError("diagonalize: non-finite off-diagonal entry");
    }

    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd z = Eigen::MatrixXd::Identity(ni, ni);
    if (n > 1) tql2(d, e, z);

    // Sign: largest-magnitude component positive.
    std::vector<Eigen::Index> peak(n);
    for (Eigen::Index a = 0; a < ni; ++a) {
        const Eigen::Index row = dominant_row(z.col(a));
        if (z(row, a) < 0) z.col(a) *= -1.0;
        peak[static_cast<std::size_t>(a)] = row;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (d[a] != d[b]) return d[a] < d[b];
        return peak[a] < peak[b];
    });

    DressedSpectrum out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(ni, ni);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = d[order[k]];
        out.eigenvectors.col(static_cast<Eigen::Index>(k)) = z.col(static_cast<Eigen::Index>(order[k]));
    }
    return out;
}

std::vector<double> project_bare(const DressedSpectrum& spectrum, std::size_t site_index) {
    if (site_index >= spectrum.dim()) {
        throw SpecError("project_bare: site index " + std::to_string(site_index) + " out of range");
    }
    const auto row = static_cast<Eigen::Index>(site_index);
    std::vector<double> amplitudes(spectrum.dim());
    for (std::size_t a = 0; a < amplitudes.size(); ++a) {
        amplitudes[a] = spectrum.eigenvectors(row, static_cast<Eigen::Index>(a));
    }
    return amplitudes;
}

double edge_splitting(const DressedSpectrum& spectrum) {
    const std::size_t m = spectrum.dim();
    if (m % 2 != 0) {
        throw UnsupportedError("edge_splitting: odd chain length " + std::to_string(m) +
                               " has no mid-gap pair");
    }
    if (m < 2) {
        throw UnsupportedError("edge_splitting: chain too short");
    }
    return spectrum.eigenvalues[m / 2] - spectrum.eigenvalues[m / 2 - 1];
}

}  // namespace rydssh
