#include "qrc/qstate.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace qrc {
namespace {

std::size_t site_bit(int site, int n_qubits) {
    return std::size_t{1} << static_cast<unsigned>(n_qubits - 1 - site);
}

// Sorted, deduplicated and range-checked copy of a qubit index set.
std::vector<int> normalized_sites(std::span<const int> sites, int n_qubits) {
    std::vector<int> out(sites.begin(), sites.end());
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
        throw DomainError("duplicate qubit index in subsystem");
    }
    for (int q : out) {
        if (q < 0 || q >= n_qubits) {
            throw DomainError("qubit index " + std::to_string(q) + " out of range for " + std::to_string(n_qubits) +
                              " qubits");
        }
    }
    return out;
}

// Full-register bit patterns for every assignment of the given qubits,
// enumerated in ascending tensor order of those qubits.
std::vector<std::size_t> patterns(const std::vector<int>& sites, int n_qubits) {
    const std::size_t count = std::size_t{1} << sites.size();
    std::vector<std::size_t> out(count, 0);
    for (std::size_t v = 0; v < count; ++v) {
        std::size_t p = 0;
        for (std::size_t s = 0; s < sites.size(); ++s) {
            if (v & (std::size_t{1} << (sites.size() - 1 - s))) p |= site_bit(sites[s], n_qubits);
        }
        out[v] = p;
    }
    return out;
}

void require_square(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols()) throw DimensionError(std::string(what) + ": matrix is not square");
}

} // namespace

int qubit_count(std::size_t dim) {
    if (dim == 0 || !std::has_single_bit(dim)) {
        throw DimensionError("dimension " + std::to_string(dim) + " is not a power of two");
    }
    return std::countr_zero(dim);
}

DensityMatrix::DensityMatrix(CMatrix m) : matrix_(std::move(m)) {
    require_square(matrix_, "DensityMatrix");
    n_qubits_ = qubit_count(static_cast<std::size_t>(matrix_.rows()));
    if (!matrix_.allFinite()) throw DomainError("DensityMatrix: non-finite entry");
    if (!is_hermitian(matrix_, kHermitianTol)) throw DomainError("DensityMatrix: not Hermitian");
    if (std::abs(matrix_.trace() - Complex(1.0)) > kTraceTol) {
        throw DomainError("DensityMatrix: trace deviates from 1");
    }
}

DensityMatrix DensityMatrix::unchecked(CMatrix m) {
    DensityMatrix rho;
    rho.n_qubits_ = qubit_count(static_cast<std::size_t>(m.rows()));
    rho.matrix_ = std::move(m);
    return rho;
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
    return unchecked(CMatrix::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::basis_state(int n_qubits, std::size_t index) {
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
    if (static_cast<Eigen::Index>(index) >= d) throw DomainError("basis index out of range");
    CMatrix m = CMatrix::Zero(d, d);
    m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
    return unchecked(std::move(m));
}

void DensityMatrix::check_invariants(double tol) const {
    if (!matrix_.allFinite()) throw DomainError("non-finite entry");
    const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol) throw DomainError("Hermiticity violated by " + std::to_string(herm));
    const double tr = std::abs(matrix_.trace() - Complex(1.0));
    if (tr > tol) throw DomainError("trace deviates from 1 by " + std::to_string(tr));
    const CMatrix h = 0.5 * (matrix_ + matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw DomainError("eigensolver failed");
    if (es.eigenvalues()(0) < -tol) {
        throw DomainError("negative eigenvalue " + std::to_string(es.eigenvalues()(0)));
    }
}

bool DensityMatrix::is_valid(double tol) const {
    try {
        check_invariants(tol);
        return true;
    } catch (const DomainError&) {
        return false;
    }
}

void DensityMatrix::renormalize() {
    matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
    const double tr = matrix_.trace().real();
    if (std::abs(tr - 1.0) > 1e-12) matrix_ /= tr;
}

CMatrix pauli(Pauli direction) {
    CMatrix s(2, 2);
    switch (direction) {
    case Pauli::X:
        s << 0, 1, 1, 0;
        break;
    case Pauli::Y:
        s << 0, Complex(0, -1), Complex(0, 1), 0;
        break;
    case Pauli::Z:
        s << 1, 0, 0, -1;
        break;
    }
    return s;
}

CMatrix pauli_on_site(Pauli direction, int site, int n_qubits) {
    if (site < 0 || site >= n_qubits) {
        throw DomainError("site " + std::to_string(site) + " out of range for " + std::to_string(n_qubits) + " qubits");
    }
    CMatrix out = CMatrix::Identity(1, 1);
    for (int q = 0; q < n_qubits; ++q) {
        out = kron(out, q == site ? pauli(direction) : CMatrix::Identity(2, 2));
    }
    return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CMatrix permute_qubits(const CMatrix& m, std::span<const int> perm) {
    require_square(m, "permute_qubits");
    const int n = qubit_count(static_cast<std::size_t>(m.rows()));
    if (static_cast<int>(perm.size()) != n) throw DimensionError("permutation length does not match qubit count");
    std::vector<int> check(perm.begin(), perm.end());
    std::sort(check.begin(), check.end());
    for (int q = 0; q < n; ++q) {
        if (check[q] != q) throw DomainError("not a permutation of the qubit indices");
    }

    const std::size_t d = std::size_t{1} << n;
    std::vector<Eigen::Index> map(d);
    for (std::size_t x = 0; x < d; ++x) {
        std::size_t y = 0;
        for (int q = 0; q < n; ++q) {
            if (x & site_bit(q, n)) y |= site_bit(perm[q], n);
        }
        map[x] = static_cast<Eigen::Index>(y);
    }
    CMatrix out(m.rows(), m.cols());
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t r = 0; r < d; ++r) {
            out(map[r], map[c]) = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
    }
    return out;
}

CMatrix partial_trace(const CMatrix& m, int n_qubits, std::span<const int> keep) {
    require_square(m, "partial_trace");
    if (keep.empty()) throw DomainError("partial_trace: keep set is empty");
    const std::vector<int> kept = normalized_sites(keep, n_qubits);
    std::vector<int> traced;
    for (int q = 0; q < n_qubits; ++q) {
        if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);
    }
    const auto kp = patterns(kept, n_qubits);
    const auto tp = patterns(traced, n_qubits);
    const auto dk = static_cast<Eigen::Index>(kp.size());

    CMatrix out = CMatrix::Zero(dk, dk);
    for (Eigen::Index j = 0; j < dk; ++j) {
        for (Eigen::Index i = 0; i < dk; ++i) {
            Complex acc = 0.0;
            for (std::size_t t : tp) {
                acc += m(static_cast<Eigen::Index>(kp[i] | t), static_cast<Eigen::Index>(kp[j] | t));
            }
            out(i, j) = acc;
        }
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
    return DensityMatrix::unchecked(partial_trace(rho.matrix(), rho.n_qubits(), keep));
}

CMatrix partial_transpose(const CMatrix& m, int n_qubits, std::span<const int> subsystem) {
    require_square(m, "partial_transpose");
    const std::vector<int> sites = normalized_sites(subsystem, n_qubits);
    std::size_t mask = 0;
    for (int q : sites) mask |= site_bit(q, n_qubits);

    const auto d = static_cast<std::size_t>(m.rows());
    CMatrix out(m.rows(), m.cols());
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t r = 0; r < d; ++r) {
            const std::size_t rs = (r & ~mask) | (c & mask);
            const std::size_t cs = (c & ~mask) | (r & mask);
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                m(static_cast<Eigen::Index>(rs), static_cast<Eigen::Index>(cs));
        }
    }
    return out;
}

CMatrix partial_transpose(const DensityMatrix& rho, std::span<const int> subsystem) {
    return partial_transpose(rho.matrix(), rho.n_qubits(), subsystem);
}

bool is_hermitian(const CMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double trace_norm(const CMatrix& m) {
    require_square(m, "trace_norm");
    if (m.size() == 0) return 0.0;
    if (is_hermitian(m, 1e-12)) {
        const CMatrix h = 0.5 * (m + m.adjoint());
        Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().sum();
    }
    Eigen::BDCSVD<CMatrix> svd(m);
    return svd.singularValues().sum();
}

double hs_norm(const CMatrix& m) { return m.norm(); }

SpectralDecomposition herm_eig(const CMatrix& h) {
    require_square(h, "herm_eig");
    if (!is_hermitian(h, kHermitianTol)) throw NotHermitianError("herm_eig: input is not Hermitian");
    SpectralDecomposition out;
    if (h.imag().cwiseAbs().maxCoeff() == 0.0) {
        const RMatrix re = h.real();
        Eigen::SelfAdjointEigenSolver<RMatrix> es(re);
        if (es.info() != Eigen::Success) throw Error("herm_eig: eigensolver did not converge");
        out.eigenvalues = es.eigenvalues();
        out.eigenvectors = es.eigenvectors().cast<Complex>();
    } else {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
        if (es.info() != Eigen::Success) throw Error("herm_eig: eigensolver did not converge");
        out.eigenvalues = es.eigenvalues();
        out.eigenvectors = es.eigenvectors();
    }
    return out;
}

RVector herm_eigenvalues(const CMatrix& h) {
    require_square(h, "herm_eigenvalues");
    if (!is_hermitian(h, kHermitianTol)) throw NotHermitianError("herm_eigenvalues: input is not Hermitian");
    if (h.imag().cwiseAbs().maxCoeff() == 0.0) {
        const RMatrix re = h.real();
        Eigen::SelfAdjointEigenSolver<RMatrix> es(re, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw Error("herm_eigenvalues: eigensolver did not converge");
        return es.eigenvalues();
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error("herm_eigenvalues: eigensolver did not converge");
    return es.eigenvalues();
}

CMatrix evolution_operator(const SpectralDecomposition& spec, double dt) {
    const Eigen::VectorXcd phases =
        spec.eigenvalues.unaryExpr([dt](double e) { return std::exp(Complex(0.0, -e * dt)); });
    return spec.eigenvectors * phases.asDiagonal() * spec.eigenvectors.adjoint();
}

bool is_unitary(const CMatrix& u, double tol) {
    if (u.rows() != u.cols()) return false;
    const CMatrix prod = u * u.adjoint();
    return (prod - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

CMatrix conjugate(const CMatrix& u, const CMatrix& rho) {
    CMatrix tmp;
    tmp.noalias() = u * rho;
    CMatrix out;
    out.noalias() = tmp * u.adjoint();
    return out;
}

} // namespace qrc
