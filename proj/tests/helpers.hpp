#pragma once

#include "qrc/qstate.hpp"

#include <random>

namespace qrc::testing {

inline CMatrix random_complex(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(g(rng), g(rng));
    }
    return m;
}

inline CMatrix random_hermitian(Eigen::Index d, Rng& rng) {
    const CMatrix a = random_complex(d, d, rng);
    return 0.5 * (a + a.adjoint());
}

inline DensityMatrix random_density(int n_qubits, Rng& rng) {
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
    const CMatrix g = random_complex(d, d, rng);
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

inline CMatrix random_unitary(Eigen::Index d, Rng& rng) {
    Eigen::HouseholderQR<CMatrix> qr(random_complex(d, d, rng));
    return qr.householderQ() * CMatrix::Identity(d, d);
}

inline double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline CMatrix singlet_projector() {
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    v(1) = 1.0 / std::sqrt(2.0);
    v(2) = -1.0 / std::sqrt(2.0);
    return v * v.adjoint();
}

} // namespace qrc::testing
