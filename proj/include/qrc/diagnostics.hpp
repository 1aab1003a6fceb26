#pragma once

#include "qrc/qstate.hpp"
#include "qrc/types.hpp"

#include <span>
#include <vector>

namespace qrc {

/// |rho(0) - U(t) rho(0) U(t)^dagger|_HS with rho(0) = rho_s (x) rho_r, for
/// each t. Computed in the eigenbasis of h, where the evolution is a
/// phase per matrix element.
std::vector<double> chi_norm_trajectory(const CMatrix& h, const DensityMatrix& rho_s, const DensityMatrix& rho_r,
                                        std::span<const double> times);

/// log2 of the trace norm of the partial transpose over `subsystem`.
/// Values in [-1e-10, 0) are reported as 0.
double log_negativity(const CMatrix& rho, int n_qubits, std::span<const int> subsystem);
double log_negativity(const DensityMatrix& rho, std::span<const int> subsystem);

/// Negativity between the leading qubits of rho_s and the rest, along the
/// evolution from rho_s (x) rho_r.
std::vector<double> negativity_trajectory(const CMatrix& h, const DensityMatrix& rho_s, const DensityMatrix& rho_r,
                                          std::span<const double> times);

/// `count` points spaced evenly in log10 between t_min and t_max.
std::vector<double> log_spaced_times(double t_min, double t_max, int count);

} // namespace qrc
