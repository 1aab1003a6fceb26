#include "qrc/reservoir.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

namespace qrc {
namespace {

std::vector<int> split_order(const ReservoirConfig& cfg) {
    std::vector<int> order = cfg.aux_sites;
    const auto res = cfg.reservoir_sites();
    order.insert(order.end(), res.begin(), res.end());
    return order;
}

std::vector<int> inverse(const std::vector<int>& perm) {
    std::vector<int> inv(perm.size());
    for (std::size_t q = 0; q < perm.size(); ++q) inv[static_cast<std::size_t>(perm[q])] = static_cast<int>(q);
    return inv;
}

void hermitize_and_normalize(CMatrix& m) {
    m = 0.5 * (m + m.adjoint()).eval();
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > 1e-12) m /= tr;
}

} // namespace

void ReservoirConfig::validate() const {
    if (n_aux < 1 || n_aux >= n_total) throw DomainError("need 1 <= n_aux < n_total");
    if (static_cast<int>(aux_sites.size()) != n_aux) throw DomainError("aux_sites size does not match n_aux");
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    std::vector<int> sorted = aux_sites;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw DomainError("duplicate aux site");
    for (int s : sorted) {
        if (s < 0 || s >= n_total) throw DomainError("aux site " + std::to_string(s) + " out of range");
    }
}

std::vector<int> ReservoirConfig::reservoir_sites() const {
    std::vector<int> out;
    for (int q = 0; q < n_total; ++q) {
        if (std::find(aux_sites.begin(), aux_sites.end(), q) == aux_sites.end()) out.push_back(q);
    }
    return out;
}

DensityMatrix encode_werner(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("Werner parameter must lie in [0, 1]");
    Eigen::Vector4cd singlet = Eigen::Vector4cd::Zero();
    singlet(1) = 1.0 / std::sqrt(2.0);  // |up down>
    singlet(2) = -1.0 / std::sqrt(2.0); // |down up>
    CMatrix rho = (1.0 - eta) * CMatrix::Identity(4, 4) / 4.0 + eta * (singlet * singlet.adjoint());
    return DensityMatrix::unchecked(std::move(rho));
}

DensityMatrix encode_bits(int b1, int b2) {
    if ((b1 != 0 && b1 != 1) || (b2 != 0 && b2 != 1)) throw DomainError("input bits must be 0 or 1");
    return DensityMatrix::basis_state(2, static_cast<std::size_t>(2 * b1 + b2));
}

DensityMatrix inject(const DensityMatrix& rho_total, const DensityMatrix& rho_input, const ReservoirConfig& cfg) {
    cfg.validate();
    if (rho_total.n_qubits() != cfg.n_total) throw DimensionError("inject: composite state has wrong qubit count");
    if (rho_input.n_qubits() != cfg.n_aux) throw DimensionError("inject: input state has wrong qubit count");
    const auto res = cfg.reservoir_sites();
    const CMatrix marginal = partial_trace(rho_total.matrix(), cfg.n_total, res);
    const CMatrix joined = kron(rho_input.matrix(), marginal);
    return DensityMatrix::unchecked(permute_qubits(joined, split_order(cfg)));
}

std::vector<double> reservoir_features(const CMatrix& reservoir) {
    const int n = qubit_count(static_cast<std::size_t>(reservoir.rows()));
    const std::size_t d = std::size_t{1} << n;
    std::vector<double> z(static_cast<std::size_t>(n), 0.0);
    std::vector<double> zz(static_cast<std::size_t>(n * (n - 1) / 2), 0.0);
    for (std::size_t r = 0; r < d; ++r) {
        const double p = reservoir(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)).real();
        auto sz = [&](int i) { return (r & (std::size_t{1} << (n - 1 - i))) ? -1.0 : 1.0; };
        std::size_t pair = 0;
        for (int i = 0; i < n; ++i) {
            z[i] += p * sz(i);
            for (int j = i + 1; j < n; ++j) zz[pair++] += p * sz(i) * sz(j);
        }
    }
    z.insert(z.end(), zz.begin(), zz.end());
    return z;
}

FeatureRecord extract_features(const DensityMatrix& rho_total, const ReservoirConfig& cfg) {
    cfg.validate();
    if (rho_total.n_qubits() != cfg.n_total) throw DimensionError("extract_features: wrong qubit count");
    const CMatrix marginal = partial_trace(rho_total.matrix(), cfg.n_total, cfg.reservoir_sites());
    return FeatureRecord{0, reservoir_features(marginal)};
}

ReservoirChannel::ReservoirChannel(const CMatrix& u, ReservoirConfig cfg) : cfg_(std::move(cfg)), u_(u) {
    cfg_.validate();
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << cfg_.n_total);
    if (u_.rows() != d || u_.cols() != d) throw DimensionError("evolution operator does not match register size");
    if (!is_unitary(u_, 1e-9)) throw DomainError("evolution operator is not unitary");
    u_split_ = permute_qubits(u_, inverse(split_order(cfg_)));
}

DensityMatrix ReservoirChannel::step(const DensityMatrix& rho_total, const DensityMatrix& rho_input) const {
    CMatrix out = conjugate(u_, inject(rho_total, rho_input, cfg_).matrix());
    hermitize_and_normalize(out);
    return DensityMatrix::unchecked(std::move(out));
}

CMatrix ReservoirChannel::apply(const CMatrix& reservoir, const DensityMatrix& rho_input) const {
    const auto d_res = static_cast<Eigen::Index>(std::size_t{1} << cfg_.n_reservoir());
    const auto d_aux = static_cast<Eigen::Index>(std::size_t{1} << cfg_.n_aux);
    if (reservoir.rows() != d_res || reservoir.cols() != d_res) {
        throw DimensionError("reservoir state has wrong dimension");
    }
    if (rho_input.n_qubits() != cfg_.n_aux) throw DimensionError("input state has wrong qubit count");

    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_input.matrix());
    const RVector& weights = es.eigenvalues();
    const CMatrix& vecs = es.eigenvectors();

    CMatrix out = CMatrix::Zero(d_res, d_res);
    CMatrix kraus(d_res, d_res);
    CMatrix tmp(d_res, d_res);
    for (Eigen::Index a = 0; a < d_aux; ++a) {
        if (std::abs(weights(a)) < 1e-15) continue;
        for (Eigen::Index s = 0; s < d_aux; ++s) {
            kraus.setZero();
            for (Eigen::Index ap = 0; ap < d_aux; ++ap) {
                const Complex c = vecs(ap, a);
                if (c == Complex(0.0)) continue;
                kraus += c * u_split_.block(s * d_res, ap * d_res, d_res, d_res);
            }
            tmp.noalias() = kraus * reservoir;
            out.noalias() += weights(a) * (tmp * kraus.adjoint());
        }
    }
    hermitize_and_normalize(out);
    return out;
}

std::vector<FeatureRecord> run_sequence(std::span<const DensityMatrix> inputs, const ReservoirChannel& channel,
                                        const DensityMatrix& rho0) {
    const auto& cfg = channel.config();
    if (rho0.n_qubits() != cfg.n_total) throw DimensionError("run_sequence: initial state has wrong qubit count");
    const CMatrix marginal = partial_trace(rho0.matrix(), cfg.n_total, cfg.reservoir_sites());
    return run_reservoir(inputs, channel, marginal);
}

std::vector<FeatureRecord> run_reservoir(std::span<const DensityMatrix> inputs, const ReservoirChannel& channel,
                                         const CMatrix& reservoir0, const ReservoirObserver& observer) {
    std::vector<FeatureRecord> out;
    out.reserve(inputs.size());
    CMatrix state = reservoir0;
    for (std::size_t n = 0; n < inputs.size(); ++n) {
        state = channel.apply(state, inputs[n]);
        if (observer) observer(n, state);
        out.push_back(FeatureRecord{n, reservoir_features(state)});
    }
    return out;
}

RMatrix feature_matrix(std::span<const FeatureRecord> records) {
    if (records.empty()) return RMatrix(0, 0);
    const auto cols = static_cast<Eigen::Index>(records.front().values.size());
    RMatrix x(static_cast<Eigen::Index>(records.size()), cols);
    for (std::size_t r = 0; r < records.size(); ++r) {
        if (static_cast<Eigen::Index>(records[r].values.size()) != cols) {
            throw DimensionError("feature records have inconsistent lengths");
        }
        for (Eigen::Index c = 0; c < cols; ++c) x(static_cast<Eigen::Index>(r), c) = records[r].values[c];
    }
    return x;
}

void write_features_csv(std::ostream& os, std::span<const FeatureRecord> records) {
    const std::size_t n_cols = records.empty() ? 0 : records.front().values.size();
    os << "step";
    for (std::size_t c = 0; c < n_cols; ++c) os << ",f_" << c;
    os << '\n';
    const auto old_precision = os.precision(17);
    for (const auto& rec : records) {
        os << rec.step_index;
        for (double v : rec.values) os << ',' << v;
        os << '\n';
    }
    os.precision(old_precision);
}

} // namespace qrc
