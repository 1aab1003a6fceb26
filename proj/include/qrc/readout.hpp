#pragma once

#include "qrc/types.hpp"

#include <span>
#include <vector>

namespace qrc {

/// Consecutive segments of a driven sequence: the first `n_transient`
/// steps are discarded, the next `n_train` fit the readout and the last
/// `n_test` evaluate it.
struct TrainTestSplit {
    int n_transient = 700;
    int n_train = 1500;
    int n_test = 150;

    int total() const { return n_transient + n_train + n_test; }
    void validate(int available) const;
};

/// Column-wise affine map to zero mean and unit variance, fitted on the
/// training rows only. Columns with vanishing spread are centered but not
/// scaled.
struct Standardizer {
    RVector mean;
    RVector scale;

    static Standardizer fit(const RMatrix& x);
    RMatrix apply(const RMatrix& x) const;
};

struct RidgeModel {
    RVector weights;
    double bias = 0.0;
    double regularization = 1e-3;
};

/// Minimizes |y - X w - b|^2 + lambda |w|^2 with an unpenalized bias by
/// solving (Xc^T Xc + lambda I) w = Xc^T yc on centered data.
RidgeModel ridge_fit(const RMatrix& features, const RVector& targets, double lambda);
RVector ridge_predict(const RidgeModel& model, const RMatrix& features);

/// Squared Pearson correlation, 0 when either variance is below 1e-14.
double pearson_capacity(std::span<const double> y, std::span<const double> yhat);
double mse(std::span<const double> y, std::span<const double> yhat);

struct SvmOptions {
    double length_scale = 1.0;
    double penalty = 1.0;
    double tolerance = 1e-3;
    // One pass is n working-pair updates for n training points.
    int max_passes = 10000;
};

/// Soft-margin classifier with the Gaussian kernel exp(-|x - x'|^2 / 2 l^2).
/// Decision function f(x) = sum_i alpha_i y_i K(x_i, x) + bias over the
/// support vectors.
struct KernelModel {
    RMatrix support_vectors;
    RVector dual_coefficients; // alpha_i, in [0, C]
    RVector labels;            // y_i in {-1, +1}
    double bias = 0.0;
    double length_scale = 1.0;
    double penalty = 1.0;
    int iterations = 0;
    bool converged = false;

    double decision(const RVector& x) const;
};

double rbf_kernel(const RVector& a, const RVector& b, double length_scale);

/// Dual solution by sequential minimal optimization with second-order
/// working-set selection and no shrinking. Stops when the maximal KKT
/// violation drops below `tolerance`.
///
/// Throws DomainError for single-class input or labels outside {-1, +1}.
KernelModel svm_fit(const RMatrix& features, const RVector& labels, const SvmOptions& options = {});

/// Sign of the decision function; exact zero maps to +1.
RVector svm_predict(const KernelModel& model, const RMatrix& features);

/// max(0, 2 (fraction correct - 1/2)).
double accuracy_rescaled(std::span<const int> predicted, std::span<const int> target);

} // namespace qrc
