#include "qrc/readout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qrc {

void TrainTestSplit::validate(int available) const {
    if (n_transient < 0 || n_train < 1 || n_test < 1) throw DomainError("split sizes must be positive");
    if (total() > available) {
        throw DomainError("split needs " + std::to_string(total()) + " steps but only " + std::to_string(available) +
                          " are available");
    }
}

Standardizer Standardizer::fit(const RMatrix& x) {
    if (x.rows() < 1) throw DomainError("Standardizer: no rows");
    Standardizer s;
    s.mean = x.colwise().mean().transpose();
    s.scale = RVector::Ones(x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        const double var = (x.col(c).array() - s.mean(c)).square().mean();
        if (var > 1e-24) s.scale(c) = std::sqrt(var);
    }
    return s;
}

RMatrix Standardizer::apply(const RMatrix& x) const {
    if (x.cols() != mean.size()) throw DimensionError("Standardizer: column count mismatch");
    return ((x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array()).matrix();
}

RidgeModel ridge_fit(const RMatrix& features, const RVector& targets, double lambda) {
    if (features.rows() < 1) throw DomainError("ridge_fit: no rows");
    if (features.rows() != targets.size()) throw DimensionError("ridge_fit: row count does not match targets");
    if (!(lambda > 0.0)) throw DomainError("ridge_fit: lambda must be positive");

    const RVector x_mean = features.colwise().mean().transpose();
    const double y_mean = targets.mean();
    const RMatrix xc = features.rowwise() - x_mean.transpose();
    const RVector yc = targets.array() - y_mean;

    RMatrix gram = xc.transpose() * xc;
    gram.diagonal().array() += lambda;
    const RVector rhs = xc.transpose() * yc;

    RidgeModel model;
    model.regularization = lambda;
    model.weights = gram.ldlt().solve(rhs);
    model.bias = y_mean - x_mean.dot(model.weights);
    return model;
}

RVector ridge_predict(const RidgeModel& model, const RMatrix& features) {
    if (features.cols() != model.weights.size()) throw DimensionError("ridge_predict: feature count mismatch");
    return (features * model.weights).array() + model.bias;
}

double pearson_capacity(std::span<const double> y, std::span<const double> yhat) {
    if (y.size() != yhat.size()) throw DimensionError("pearson_capacity: length mismatch");
    if (y.size() < 2) throw DomainError("pearson_capacity: need at least two samples");
    const auto n = static_cast<double>(y.size());
    double my = 0.0;
    double mh = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        my += y[i];
        mh += yhat[i];
    }
    my /= n;
    mh /= n;
    double cov = 0.0;
    double vy = 0.0;
    double vh = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double a = y[i] - my;
        const double b = yhat[i] - mh;
        cov += a * b;
        vy += a * a;
        vh += b * b;
    }
    cov /= n;
    vy /= n;
    vh /= n;
    if (vy < 1e-14 || vh < 1e-14) return 0.0;
    return std::clamp(cov * cov / (vy * vh), 0.0, 1.0);
}

double mse(std::span<const double> y, std::span<const double> yhat) {
    if (y.size() != yhat.size()) throw DimensionError("mse: length mismatch");
    if (y.empty()) throw DomainError("mse: empty input");
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) acc += (y[i] - yhat[i]) * (y[i] - yhat[i]);
    return acc / static_cast<double>(y.size());
}

double rbf_kernel(const RVector& a, const RVector& b, double length_scale) {
    return std::exp(-(a - b).squaredNorm() / (2.0 * length_scale * length_scale));
}

double KernelModel::decision(const RVector& x) const {
    double f = bias;
    for (Eigen::Index i = 0; i < support_vectors.rows(); ++i) {
        f += dual_coefficients(i) * labels(i) * rbf_kernel(support_vectors.row(i).transpose(), x, length_scale);
    }
    return f;
}

KernelModel svm_fit(const RMatrix& features, const RVector& labels, const SvmOptions& options) {
    const Eigen::Index n = features.rows();
    if (labels.size() != n) throw DimensionError("svm_fit: label count mismatch");
    if (!(options.penalty > 0.0) || !(options.length_scale > 0.0)) {
        throw DomainError("svm_fit: penalty and length scale must be positive");
    }
    bool has_pos = false;
    bool has_neg = false;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (labels(i) == 1.0) {
            has_pos = true;
        } else if (labels(i) == -1.0) {
            has_neg = true;
        } else {
            throw DomainError("svm_fit: labels must be -1 or +1");
        }
    }
    if (!has_pos || !has_neg) throw DomainError("svm_fit: both classes must be present");

    const double c = options.penalty;
    const double gamma = 1.0 / (2.0 * options.length_scale * options.length_scale);
    constexpr double tau = 1e-12;

    // Gram matrix from squared norms: |a-b|^2 = |a|^2 + |b|^2 - 2 a.b
    const RVector sq = features.rowwise().squaredNorm();
    RMatrix k = features * features.transpose();
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            k(i, j) = std::exp(-gamma * std::max(0.0, sq(i) + sq(j) - 2.0 * k(i, j)));
        }
    }

    const RVector& y = labels;
    RVector alpha = RVector::Zero(n);
    RVector grad = RVector::Constant(n, -1.0);
    auto at_upper = [&](Eigen::Index t) { return alpha(t) >= c; };
    auto at_lower = [&](Eigen::Index t) { return alpha(t) <= 0.0; };

    const long long max_iter = static_cast<long long>(options.max_passes) * std::max<Eigen::Index>(n, 1);
    long long iter = 0;
    bool converged = false;
    for (; iter < max_iter; ++iter) {
        double gmax = -std::numeric_limits<double>::infinity();
        Eigen::Index i = -1;
        for (Eigen::Index t = 0; t < n; ++t) {
            if (y(t) > 0) {
                if (!at_upper(t) && -grad(t) >= gmax) {
                    gmax = -grad(t);
                    i = t;
                }
            } else if (!at_lower(t) && grad(t) >= gmax) {
                gmax = grad(t);
                i = t;
            }
        }

        double gmax2 = -std::numeric_limits<double>::infinity();
        double best = std::numeric_limits<double>::infinity();
        Eigen::Index j = -1;
        for (Eigen::Index t = 0; t < n; ++t) {
            double diff = 0.0;
            if (y(t) > 0) {
                if (at_lower(t)) continue;
                diff = gmax + grad(t);
                gmax2 = std::max(gmax2, grad(t));
            } else {
                if (at_upper(t)) continue;
                diff = gmax - grad(t);
                gmax2 = std::max(gmax2, -grad(t));
            }
            if (i < 0 || diff <= 0.0) continue;
            double quad = k(i, i) + k(t, t) - 2.0 * k(i, t);
            if (quad <= 0.0) quad = tau;
            const double obj = -diff * diff / quad;
            if (obj <= best) {
                best = obj;
                j = t;
            }
        }

        if (i < 0 || j < 0 || gmax + gmax2 < options.tolerance) {
            converged = true;
            break;
        }

        const double old_i = alpha(i);
        const double old_j = alpha(j);
        if (y(i) != y(j)) {
            double quad = k(i, i) + k(j, j) - 2.0 * k(i, j);
            if (quad <= 0.0) quad = tau;
            const double delta = (-grad(i) - grad(j)) / quad;
            const double diff = alpha(i) - alpha(j);
            alpha(i) += delta;
            alpha(j) += delta;
            if (diff > 0.0) {
                if (alpha(j) < 0.0) {
                    alpha(j) = 0.0;
                    alpha(i) = diff;
                }
            } else if (alpha(i) < 0.0) {
                alpha(i) = 0.0;
                alpha(j) = -diff;
            }
            if (diff > 0.0) {
                if (alpha(i) > c) {
                    alpha(i) = c;
                    alpha(j) = c - diff;
                }
            } else if (alpha(j) > c) {
                alpha(j) = c;
                alpha(i) = c + diff;
            }
        } else {
            double quad = k(i, i) + k(j, j) - 2.0 * k(i, j);
            if (quad <= 0.0) quad = tau;
            const double delta = (grad(i) - grad(j)) / quad;
            const double sum = alpha(i) + alpha(j);
            alpha(i) -= delta;
            alpha(j) += delta;
            if (sum > c) {
                if (alpha(i) > c) {
                    alpha(i) = c;
                    alpha(j) = sum - c;
                }
            } else if (alpha(j) < 0.0) {
                alpha(j) = 0.0;
                alpha(i) = sum;
            }
            if (sum > c) {
                if (alpha(j) > c) {
                    alpha(j) = c;
                    alpha(i) = sum - c;
                }
            } else if (alpha(i) < 0.0) {
                alpha(i) = 0.0;
                alpha(j) = sum;
            }
        }

        const double di = alpha(i) - old_i;
        const double dj = alpha(j) - old_j;
        // Q_tk = y_t y_k K_tk
        grad.array() += (y.array() * k.col(i).array()) * (y(i) * di) + (y.array() * k.col(j).array()) * (y(j) * dj);
    }

    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    int n_free = 0;
    for (Eigen::Index t = 0; t < n; ++t) {
        const double yg = y(t) * grad(t);
        if (at_upper(t)) {
            if (y(t) < 0) {
                ub = std::min(ub, yg);
            } else {
                lb = std::max(lb, yg);
            }
        } else if (at_lower(t)) {
            if (y(t) > 0) {
                ub = std::min(ub, yg);
            } else {
                lb = std::max(lb, yg);
            }
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    const double rho = n_free > 0 ? sum_free / n_free : 0.5 * (ub + lb);

    KernelModel model;
    model.length_scale = options.length_scale;
    model.penalty = c;
    model.bias = -rho;
    model.iterations = static_cast<int>(iter);
    model.converged = converged;
    std::vector<Eigen::Index> sv;
    for (Eigen::Index t = 0; t < n; ++t) {
        if (alpha(t) > 0.0) sv.push_back(t);
    }
    const auto n_sv = static_cast<Eigen::Index>(sv.size());
    model.support_vectors.resize(n_sv, features.cols());
    model.dual_coefficients.resize(n_sv);
    model.labels.resize(n_sv);
    for (Eigen::Index s = 0; s < n_sv; ++s) {
        model.support_vectors.row(s) = features.row(sv[s]);
        model.dual_coefficients(s) = alpha(sv[s]);
        model.labels(s) = y(sv[s]);
    }
    return model;
}

RVector svm_predict(const KernelModel& model, const RMatrix& features) {
    if (model.support_vectors.rows() > 0 && features.cols() != model.support_vectors.cols()) {
        throw DimensionError("svm_predict: feature count mismatch");
    }
    RVector out(features.rows());
    for (Eigen::Index r = 0; r < features.rows(); ++r) {
        out(r) = model.decision(features.row(r).transpose()) >= 0.0 ? 1.0 : -1.0;
    }
    return out;
}

double accuracy_rescaled(std::span<const int> predicted, std::span<const int> target) {
    if (predicted.size() != target.size()) throw DimensionError("accuracy_rescaled: length mismatch");
    if (predicted.empty()) throw DomainError("accuracy_rescaled: empty input");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] == target[i]) ++correct;
    }
    const double frac = static_cast<double>(correct) / static_cast<double>(predicted.size());
    return std::max(0.0, 2.0 * (frac - 0.5));
}

} // namespace qrc
