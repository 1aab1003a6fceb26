#pragma once

#include "qrc/graph.hpp"
#include "qrc/types.hpp"

#include <span>
#include <vector>

namespace qrc {

/// Couplings and fields in units of J^z. Defaults are the operating point
/// (J^z, h^z, h^x) = (1, 0, 1) with z-disorder 0.2.
struct HamiltonianSpec {
    double jz = 1.0;
    double jx = 0.0;
    double hx = 1.0;
    double hz = 0.0;
    double delta_x = 0.0;
    double delta_z = 0.2;

    void validate() const;
};

/// Per-site field offsets, drawn uniformly from [-delta, delta].
struct DisorderRealization {
    std::vector<double> delta_x_fields;
    std::vector<double> delta_z_fields;
};

DisorderRealization sample_disorder(const HamiltonianSpec& spec, int n, Rng& rng);

/// sum_{edges} (jz Z_i Z_j + jx X_i X_j) + sum_i (hx + dx_i) X_i + (hz + dz_i) Z_i,
/// each edge counted once. The result is real symmetric.
CMatrix build_hamiltonian(const Graph& g, const HamiltonianSpec& spec, const DisorderRealization& dis);

/// Transverse-field Ising limit: sum_{edges} jz Z_i Z_j + sum_i hx_i X_i + hz_i Z_i,
/// assembled from explicit Pauli strings.
CMatrix build_transverse_ising(const Graph& g, double jz, const std::vector<double>& hx_fields,
                               const std::vector<double>& hz_fields);

struct LevelSpacingOptions {
    // Restrict to the central half of the spectrum.
    bool central_half = false;
    double degenerate_gap = 1e-12;
};

/// Mean of min(d_n, d_{n+1}) / max(d_n, d_{n+1}) over consecutive gaps of a
/// sorted spectrum. Ratios touching a gap below `degenerate_gap` are skipped.
double level_spacing_ratio(std::span<const double> energies, const LevelSpacingOptions& options = {});

} // namespace qrc
