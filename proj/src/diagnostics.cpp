#include "qrc/diagnostics.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace qrc {
namespace {

CMatrix product_state(const CMatrix& h, const DensityMatrix& rho_s, const DensityMatrix& rho_r) {
    const auto d = rho_s.matrix().rows() * rho_r.matrix().rows();
    if (h.rows() != d || h.cols() != d) {
        throw DimensionError("Hamiltonian dimension " + std::to_string(h.rows()) + " does not match state dimension " +
                             std::to_string(d));
    }
    return kron(rho_s.matrix(), rho_r.matrix());
}

} // namespace

std::vector<double> chi_norm_trajectory(const CMatrix& h, const DensityMatrix& rho_s, const DensityMatrix& rho_r,
                                        std::span<const double> times) {
    const CMatrix rho0 = product_state(h, rho_s, rho_r);
    const SpectralDecomposition spec = herm_eig(h);
    const CMatrix rotated = spec.eigenvectors.adjoint() * rho0 * spec.eigenvectors;
    const RMatrix weight = rotated.cwiseAbs2();
    const RVector& e = spec.eigenvalues;

    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        // |1 - exp(-i (E_m - E_n) t)|^2 = 2 - 2 cos((E_m - E_n) t)
        double acc = 0.0;
        for (Eigen::Index n = 0; n < weight.cols(); ++n) {
            for (Eigen::Index m = 0; m < weight.rows(); ++m) {
                acc += weight(m, n) * (2.0 - 2.0 * std::cos((e(m) - e(n)) * t));
            }
        }
        out.push_back(std::sqrt(std::max(acc, 0.0)));
    }
    return out;
}

double log_negativity(const CMatrix& rho, int n_qubits, std::span<const int> subsystem) {
    if (subsystem.empty() || static_cast<int>(subsystem.size()) >= n_qubits) {
        throw DomainError("log_negativity: subsystem must be a proper nonempty subset");
    }
    const double value = std::log2(trace_norm(partial_transpose(rho, n_qubits, subsystem)));
    if (value < 0.0 && value >= -1e-10) return 0.0;
    return value;
}

double log_negativity(const DensityMatrix& rho, std::span<const int> subsystem) {
    return log_negativity(rho.matrix(), rho.n_qubits(), subsystem);
}

std::vector<double> negativity_trajectory(const CMatrix& h, const DensityMatrix& rho_s, const DensityMatrix& rho_r,
                                          std::span<const double> times) {
    const CMatrix rho0 = product_state(h, rho_s, rho_r);
    const int n = rho_s.n_qubits() + rho_r.n_qubits();
    std::vector<int> aux(static_cast<std::size_t>(rho_s.n_qubits()));
    std::iota(aux.begin(), aux.end(), 0);

    const SpectralDecomposition spec = herm_eig(h);
    const CMatrix rotated = spec.eigenvectors.adjoint() * rho0 * spec.eigenvectors;
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        const Eigen::VectorXcd phase =
            spec.eigenvalues.unaryExpr([t](double e) { return std::exp(Complex(0.0, -e * t)); });
        const CMatrix evolved_eig = phase.asDiagonal() * rotated * phase.conjugate().asDiagonal();
        const CMatrix evolved = spec.eigenvectors * evolved_eig * spec.eigenvectors.adjoint();
        out.push_back(log_negativity(evolved, n, aux));
    }
    return out;
}

std::vector<double> log_spaced_times(double t_min, double t_max, int count) {
    if (!(t_min > 0.0) || !(t_max > t_min) || count < 2) throw DomainError("log_spaced_times: invalid range");
    std::vector<double> out(static_cast<std::size_t>(count));
    const double a = std::log10(t_min);
    const double b = std::log10(t_max);
    for (int i = 0; i < count; ++i) out[i] = std::pow(10.0, a + (b - a) * i / (count - 1));
    return out;
}

} // namespace qrc
