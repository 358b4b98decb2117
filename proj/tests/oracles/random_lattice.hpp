// Test-only random lattice generator (hand-rolled property testing).
#pragma once

#include "rydssh/lattice.hpp"

#include <random>
#include <vector>

namespace oracle {

struct LatticeRanges {
    std::vector<std::size_t> sizes{2, 4, 6, 8};
    double coupling_min = 50.0, coupling_max = 1000.0;
    double detuning_min = -500.0, detuning_max = 500.0;
    bool zero_detuning = false;
};

inline rydssh::LatticeSpec random_lattice(std::mt19937_64& rng, const LatticeRanges& r = {}) {
    std::uniform_int_distribution<std::size_t> pick(0, r.sizes.size() - 1);
    std::uniform_real_distribution<double> coupling(r.coupling_min, r.coupling_max);
    std::uniform_real_distribution<double> detuning(r.detuning_min, r.detuning_max);
    const std::size_t m = r.sizes[pick(rng)];
    rydssh::LatticeSpec spec;
    for (std::size_t i = 0; i < m; ++i) spec.site_labels.push_back(58 + static_cast<int>(i));
    for (std::size_t i = 0; i + 1 < m; ++i) {
        spec.couplings_khz.push_back(coupling(rng));
        spec.bond_detunings_khz.push_back(r.zero_detuning ? 0.0 : detuning(rng));
    }
    return spec;
}

}  // namespace oracle
