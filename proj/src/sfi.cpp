#include "rydssh/sfi.hpp"

#include "rydssh/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace rydssh {

namespace {

void require_same_grid(const SFITrace& a, const SFITrace& b, const char* what) {
    if (a.times_us.size() != b.times_us.size()) {
        throw SpecError(std::string(what) + ": traces do not share a time grid");
    }
    for (std::size_t i = 0; i < a.times_us.size(); ++i) {
        if (std::abs(a.times_us[i] - b.times_us[i]) > 1e-9 * (1.0 + std::abs(a.times_us[i]))) {
            throw SpecError(std::string(what) + ": traces do not share a time grid");
        }
    }
}

std::string trace_name(const SFITrace& t, std::size_t index) {
    return t.label ? std::to_string(*t.label) + "s" : "#" + std::to_string(index);
}

SFITrace gaussian_trace(const std::vector<double>& grid, double centre, double sigma) {
    SFITrace out;
    out.times_us = grid;
    out.signal.resize(grid.size());
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double z = (grid[i] - centre) / sigma;
        out.signal[i] = norm * std::exp(-0.5 * z * z);
    }
    return out;
}

// Lawson-Hanson active-set NNLS.
Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    const Eigen::Index k = a.cols();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(k);
    std::vector<bool> passive(static_cast<std::size_t>(k), false);
    const double tol = 1e-12 * a.norm() * std::max(1.0, b.norm());
    const int max_outer = static_cast<int>(3 * k + 10);

    auto solve_passive = [&](Eigen::VectorXd& z) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < k; ++j) {
            if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
        }
        Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t c = 0; c < idx.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = a.col(idx[c]);
        const Eigen::VectorXd zs = sub.colPivHouseholderQr().solve(b);
        z.setZero(k);
        for (std::size_t c = 0; c < idx.size(); ++c) z(idx[c]) = zs(static_cast<Eigen::Index>(c));
    };

    for (int outer = 0; outer < max_outer; ++outer) {
        const Eigen::VectorXd w = a.transpose() * (b - a * x);
        Eigen::Index best = -1;
        for (Eigen::Index j = 0; j < k; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && w(j) > tol && (best < 0 || w(j) > w(best))) best = j;
        }
        if (best < 0) break;
        passive[static_cast<std::size_t>(best)] = true;

        Eigen::VectorXd z;
        for (int inner = 0; inner <= k; ++inner) {
            solve_passive(z);
            bool feasible = true;
            for (Eigen::Index j = 0; j < k; ++j) {
                if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) feasible = false;
            }
            if (feasible) break;
            double alpha = 1.0;
            for (Eigen::Index j = 0; j < k; ++j) {
                if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
                    alpha = std::min(alpha, x(j) / (x(j) - z(j)));
                }
            }
            x += alpha * (z - x);
            for (Eigen::Index j = 0; j < k; ++j) {
                if (passive[static_cast<std::size_t>(j)] && x(j) <= tol) {
                    passive[static_cast<std::size_t>(j)] = false;
                    x(j) = 0.0;
                }
            }
        }
        x = z;
    }
    return x.cwiseMax(0.0);
}

}  // namespace

void RampParams::validate() const {
    if (!(peak_field_v_per_cm > 0.0) || !(time_constant_us > 0.0)) {
        throw SpecError("ramp peak field and time constant must be positive");
    }
}

double RampParams::field_at(double t_us) const {
    return peak_field_v_per_cm * (1.0 - std::exp(-t_us / time_constant_us));
}

double ionization_field_au(int n, double quantum_defect) {
    const double n_eff = static_cast<double>(n) - quantum_defect;
    if (!(n_eff > 0.0)) {
        throw SpecError("ionization_field: n = " + std::to_string(n) + " must exceed the quantum defect");
    }
    return 1.0 / (16.0 * std::pow(n_eff, 4));
}

double ionization_field(int n, double quantum_defect) {
    return ionization_field_au(n, quantum_defect) * constants::kAtomicUnitFieldVPerCm;
}

double ionization_time(double field_v_per_cm, const RampParams& ramp) {
    ramp.validate();
    if (!(field_v_per_cm > 0.0)) throw SpecError("ionization_time: field must be positive");
    if (field_v_per_cm >= ramp.peak_field_v_per_cm) {
        throw UnsupportedError("ionization_time: threshold " + std::to_string(field_v_per_cm) +
                               " V/cm is not reached by a ramp peaking at " +
                               std::to_string(ramp.peak_field_v_per_cm) + " V/cm");
    }
    return -ramp.time_constant_us * std::log1p(-field_v_per_cm / ramp.peak_field_v_per_cm);
}

SFITrace synthesize_trace(int n, const RampParams& ramp, double width_us,
                          const std::vector<double>& grid_us, double quantum_defect) {
    if (!(width_us > 0.0)) throw SpecError("synthesize_trace: width must be positive");
    const double centre = ionization_time(ionization_field(n, quantum_defect), ramp);
    SFITrace out = gaussian_trace(grid_us, centre, width_us);
    out.label = n;
    return out;
}

SFITrace background_trace(const std::vector<double>& grid_us) {
    if (grid_us.size() < 2) throw SpecError("background_trace: grid too short");
    const double span = grid_us.back() - grid_us.front();
    return gaussian_trace(grid_us, grid_us.front() + 0.5 * span, 0.25 * span);
}

SFITrace mix_traces(const std::vector<SFITrace>& traces, const std::vector<double>& weights) {
    if (traces.empty() || traces.size() != weights.size()) {
        throw SpecError("mix_traces: need one weight per trace");
    }
    SFITrace out;
    out.times_us = traces.front().times_us;
    out.signal.assign(out.times_us.size(), 0.0);
    for (std::size_t j = 0; j < traces.size(); ++j) {
        require_same_grid(traces.front(), traces[j], "mix_traces");
        for (std::size_t i = 0; i < out.signal.size(); ++i) out.signal[i] += weights[j] * traces[j].signal[i];
    }
    return out;
}

UnmixResult unmix(const SFITrace& observed, const std::vector<SFITrace>& basis,
                  const std::optional<SFITrace>& background) {
    if (basis.empty()) throw SpecError("unmix: empty basis");
    std::vector<const SFITrace*> columns;
    for (const auto& t : basis) columns.push_back(&t);
    if (background) columns.push_back(&*background);

    const auto rows = static_cast<Eigen::Index>(observed.signal.size());
    const auto cols = static_cast<Eigen::Index>(columns.size());
    Eigen::MatrixXd a(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        const SFITrace& t = *columns[static_cast<std::size_t>(j)];
        require_same_grid(observed, t, "unmix");
        if (t.signal.size() != observed.signal.size()) throw SpecError("unmix: signal length mismatch");
        a.col(j) = Eigen::Map<const Eigen::VectorXd>(t.signal.data(), rows);
    }
    const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(observed.signal.data(), rows);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(1e-10);
    if (qr.rank() < cols) {
        // Report the most collinear pair.
        Eigen::Index pi = 0, pj = std::min<Eigen::Index>(1, cols - 1);
        double worst = -1.0;
        for (Eigen::Index i = 0; i < cols; ++i) {
            for (Eigen::Index j = i + 1; j < cols; ++j) {
                const double denom = a.col(i).norm() * a.col(j).norm();
                const double c = denom > 0 ? std::abs(a.col(i).dot(a.col(j))) / denom : 1.0;
                if (c > worst) {
                    worst = c;
                    pi = i;
                    pj = j;
                }
            }
        }
        auto name = [&](Eigen::Index j) {
            return j < static_cast<Eigen::Index>(basis.size()) ? trace_name(basis[static_cast<std::size_t>(j)], static_cast<std::size_t>(j))
                                                              : std::string("background");
        };
        throw NumericError("unmix: basis is rank deficient; traces " + name(pi) + " and " + name(pj) +
                           " are indistinguishable on this grid");
    }

    const Eigen::VectorXd x = nnls(a, b);
    UnmixResult out;
    const std::size_t k = basis.size();
    out.raw.assign(x.data(), x.data() + k);
    if (background) out.background = x(static_cast<Eigen::Index>(k));
    double total = 0.0;
    for (double c : out.raw) total += c;
    out.normalized.resize(k, 0.0);
    if (total > 0.0) {
        for (std::size_t j = 0; j < k; ++j) out.normalized[j] = out.raw[j] / total;
    }
    out.residual_norm = (a * x - b).norm();
    return out;
}

}  // namespace rydssh
