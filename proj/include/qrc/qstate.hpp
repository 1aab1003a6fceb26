#pragma once

#include "qrc/types.hpp"

#include <span>
#include <vector>

namespace qrc {

// Qubit 0 is the leftmost (most significant) tensor factor: basis state
// |b0 b1 ... b_{n-1}> has row index sum_i b_i 2^(n-1-i), and |up> = (1,0)^T
// is basis state 0, so sigma^z |up> = +|up>.

enum class Pauli { X, Y, Z };

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

/// Unit-trace Hermitian matrix on n qubits. Construction checks shape,
/// finiteness, Hermiticity and trace; positivity is checked on demand by
/// check_invariants() since it needs an eigensolve.
class DensityMatrix {
public:
    DensityMatrix() = default;
    explicit DensityMatrix(CMatrix m);

    /// Skips validation. For results of operations that preserve the
    /// invariants by construction.
    static DensityMatrix unchecked(CMatrix m);

    static DensityMatrix maximally_mixed(int n_qubits);
    /// Projector onto a computational basis state.
    static DensityMatrix basis_state(int n_qubits, std::size_t index);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
    const CMatrix& matrix() const { return matrix_; }

    /// Throws DomainError describing the first violated invariant.
    void check_invariants(double tol = kPsdTol) const;
    bool is_valid(double tol = kPsdTol) const;

    /// Hermitian part, rescaled to unit trace when the trace has drifted by
    /// more than 1e-12.
    void renormalize();

private:
    int n_qubits_ = 0;
    CMatrix matrix_;
};

struct SpectralDecomposition {
    RVector eigenvalues;  // ascending
    CMatrix eigenvectors; // columns
};

int qubit_count(std::size_t dim);

CMatrix pauli(Pauli direction);
CMatrix pauli_on_site(Pauli direction, int site, int n_qubits);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Relabels tensor factors: qubit q of the input becomes qubit perm[q] of
/// the output.
CMatrix permute_qubits(const CMatrix& m, std::span<const int> perm);

/// Reduced state on `keep`, returned in ascending-index tensor order.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);
CMatrix partial_trace(const CMatrix& m, int n_qubits, std::span<const int> keep);

CMatrix partial_transpose(const CMatrix& m, int n_qubits, std::span<const int> subsystem);
CMatrix partial_transpose(const DensityMatrix& rho, std::span<const int> subsystem);

bool is_hermitian(const CMatrix& m, double tol = kHermitianTol);

/// Sum of singular values. Hermitian input goes through an eigensolve.
double trace_norm(const CMatrix& m);
double hs_norm(const CMatrix& m);

/// Throws NotHermitianError if max |h - h^dagger| exceeds 1e-10. Uses a
/// real symmetric solver when the imaginary part vanishes exactly.
SpectralDecomposition herm_eig(const CMatrix& h);
RVector herm_eigenvalues(const CMatrix& h);

/// V diag(exp(-i E dt)) V^dagger.
CMatrix evolution_operator(const SpectralDecomposition& spec, double dt);

bool is_unitary(const CMatrix& u, double tol = 1e-9);

/// U rho U^dagger.
CMatrix conjugate(const CMatrix& u, const CMatrix& rho);

} // namespace qrc
