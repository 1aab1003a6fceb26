#include "qrc/hamiltonian.hpp"

#include "qrc/qstate.hpp"

#include <algorithm>
#include <string>

namespace qrc {

void HamiltonianSpec::validate() const {
    if (!(delta_x >= 0.0) || !(delta_z >= 0.0)) throw DomainError("disorder amplitudes must be non-negative");
}

DisorderRealization sample_disorder(const HamiltonianSpec& spec, int n, Rng& rng) {
    spec.validate();
    if (n < 1) throw DomainError("sample_disorder: need at least one site");
    DisorderRealization dis;
    dis.delta_x_fields.assign(static_cast<std::size_t>(n), 0.0);
    dis.delta_z_fields.assign(static_cast<std::size_t>(n), 0.0);
    // Zero amplitude still consumes draws so realizations with and without
    // x-disorder share the z-disorder stream.
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (auto& d : dis.delta_x_fields) d = spec.delta_x * unit(rng);
    for (auto& d : dis.delta_z_fields) d = spec.delta_z * unit(rng);
    return dis;
}

CMatrix build_hamiltonian(const Graph& g, const HamiltonianSpec& spec, const DisorderRealization& dis) {
    const int n = g.n_vertices;
    if (static_cast<int>(dis.delta_x_fields.size()) != n || static_cast<int>(dis.delta_z_fields.size()) != n) {
        throw DimensionError("disorder length does not match graph size " + std::to_string(n));
    }
    const std::size_t d = std::size_t{1} << n;
    auto bit = [n](int site) { return std::size_t{1} << (n - 1 - site); };
    auto z_of = [&](std::size_t state, int site) { return (state & bit(site)) ? -1.0 : 1.0; };

    RMatrix h = RMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t s = 0; s < d; ++s) {
        const auto row = static_cast<Eigen::Index>(s);
        double diag = 0.0;
        for (auto [i, j] : g.edges) diag += spec.jz * z_of(s, i) * z_of(s, j);
        for (int i = 0; i < n; ++i) diag += (spec.hz + dis.delta_z_fields[i]) * z_of(s, i);
        h(row, row) = diag;

        for (int i = 0; i < n; ++i) {
            h(static_cast<Eigen::Index>(s ^ bit(i)), row) += spec.hx + dis.delta_x_fields[i];
        }
        if (spec.jx != 0.0) {
            for (auto [i, j] : g.edges) h(static_cast<Eigen::Index>(s ^ bit(i) ^ bit(j)), row) += spec.jx;
        }
    }
    return h.cast<Complex>();
}

CMatrix build_transverse_ising(const Graph& g, double jz, const std::vector<double>& hx_fields,
                               const std::vector<double>& hz_fields) {
    const int n = g.n_vertices;
    if (static_cast<int>(hx_fields.size()) != n || static_cast<int>(hz_fields.size()) != n) {
        throw DimensionError("field length does not match graph size");
    }
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << n);
    CMatrix h = CMatrix::Zero(d, d);
    for (auto [i, j] : g.edges) h += jz * pauli_on_site(Pauli::Z, i, n) * pauli_on_site(Pauli::Z, j, n);
    for (int i = 0; i < n; ++i) {
        h += hx_fields[i] * pauli_on_site(Pauli::X, i, n);
        h += hz_fields[i] * pauli_on_site(Pauli::Z, i, n);
    }
    return h;
}

double level_spacing_ratio(std::span<const double> energies, const LevelSpacingOptions& options) {
    if (energies.size() < 3) throw DomainError("level_spacing_ratio: need at least 3 levels");
    if (!std::is_sorted(energies.begin(), energies.end())) {
        throw DomainError("level_spacing_ratio: energies must be sorted ascending");
    }
    std::size_t lo = 0;
    std::size_t hi = energies.size();
    if (options.central_half) {
        lo = energies.size() / 4;
        hi = energies.size() - energies.size() / 4;
        if (hi - lo < 3) throw DomainError("level_spacing_ratio: central window has fewer than 3 levels");
    }

    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t n = lo; n + 2 < hi; ++n) {
        const double a = energies[n + 1] - energies[n];
        const double b = energies[n + 2] - energies[n + 1];
        if (a < options.degenerate_gap || b < options.degenerate_gap) continue;
        sum += std::min(a, b) / std::max(a, b);
        ++count;
    }
    if (count == 0) throw DomainError("level_spacing_ratio: spectrum is fully degenerate");
    return sum / static_cast<double>(count);
}

} // namespace qrc
