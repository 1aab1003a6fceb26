#pragma once

#include "qrc/qstate.hpp"
#include "qrc/types.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace qrc {

/// Split of the register into the input (auxiliary) qubits and the
/// measured reservoir qubits. `dt` is the evolution time per input in
/// units of 1/J^z.
struct ReservoirConfig {
    int n_total = 8;
    int n_aux = 2;
    double dt = 3.0;
    std::vector<int> aux_sites{0, 1};

    void validate() const;
    /// Complement of aux_sites, ascending.
    std::vector<int> reservoir_sites() const;
    int n_reservoir() const { return n_total - n_aux; }
    /// N' single-site plus N'(N'-1)/2 pair observables.
    int n_features() const { return n_reservoir() * (n_reservoir() + 1) / 2; }
};

/// <Z_i> for reservoir sites in ascending order, then <Z_i Z_j> for i < j
/// in lexicographic order.
struct FeatureRecord {
    std::size_t step_index = 0;
    std::vector<double> values;
};

/// (1 - eta) I/4 + eta |singlet><singlet| on two qubits.
DensityMatrix encode_werner(double eta);

/// Product of per-qubit states (1 - b)|up><up| + b|down><down|.
DensityMatrix encode_bits(int b1, int b2);

/// Replaces the auxiliary marginal of `rho_total` with `rho_input`.
DensityMatrix inject(const DensityMatrix& rho_total, const DensityMatrix& rho_input, const ReservoirConfig& cfg);

/// Features of the reservoir marginal of a composite state.
FeatureRecord extract_features(const DensityMatrix& rho_total, const ReservoirConfig& cfg);

/// Features of a reservoir-only state (qubits in ascending reservoir-site
/// order).
std::vector<double> reservoir_features(const CMatrix& reservoir);

/// The injection channel for a fixed evolution operator U.
///
/// apply() maps the reservoir marginal directly: with the input state
/// written as sum_a p_a |v_a><v_a| and U split into blocks U_{s,a'} over the
/// auxiliary basis, the next marginal is
///   sum_{s,a} p_a K_{s,a} rho K_{s,a}^dagger,  K_{s,a} = sum_{a'} v_a[a'] U_{s,a'},
/// which never forms the composite state.
class ReservoirChannel {
public:
    /// Throws DomainError if `u` is not unitary to 1e-9 or does not match
    /// the register size.
    ReservoirChannel(const CMatrix& u, ReservoirConfig cfg);

    const ReservoirConfig& config() const { return cfg_; }
    const CMatrix& unitary() const { return u_; }

    /// U (rho_input (x) Tr_S rho_total) U^dagger on the full register.
    DensityMatrix step(const DensityMatrix& rho_total, const DensityMatrix& rho_input) const;

    /// Next reservoir marginal.
    CMatrix apply(const CMatrix& reservoir, const DensityMatrix& rho_input) const;

private:
    ReservoirConfig cfg_;
    CMatrix u_;
    // U with qubits reordered as [aux_sites..., reservoir_sites...].
    CMatrix u_split_;
};

using ReservoirObserver = std::function<void(std::size_t step, const CMatrix& reservoir)>;

/// Drives the channel with `inputs`, measuring after every evolution.
std::vector<FeatureRecord> run_sequence(std::span<const DensityMatrix> inputs, const ReservoirChannel& channel,
                                        const DensityMatrix& rho0);

/// Same, starting from a reservoir-only state. The observer sees the
/// marginal after each step.
std::vector<FeatureRecord> run_reservoir(std::span<const DensityMatrix> inputs, const ReservoirChannel& channel,
                                         const CMatrix& reservoir0, const ReservoirObserver& observer = {});

/// Rows are steps, columns features.
RMatrix feature_matrix(std::span<const FeatureRecord> records);

/// Columns: step, f_0 ... f_{N_O - 1}.
void write_features_csv(std::ostream& os, std::span<const FeatureRecord> records);

} // namespace qrc
