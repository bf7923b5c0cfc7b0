#pragma once

#include "lrsd/matrix.hpp"

namespace lrsd {

/// Thin singular value decomposition M = U·diag(σ)·Vᵀ with
/// σ sorted non-increasing, U n×r and V p×r, r = min(n, p).
struct SvdFactors {
    Eigen::MatrixXd u;
    Eigen::VectorXd singular_values;
    Eigen::MatrixXd v;

    Index rank(double rel_cutoff = 1e-9) const;
    Eigen::MatrixXd reconstruct() const;
};

SvdFactors svd(const Eigen::MatrixXd& m);
SvdFactors svd(const DenseMatrix& m);
Eigen::VectorXd singular_values(const Eigen::MatrixXd& m);

double nuclear_norm(const Eigen::MatrixXd& m);

/// Median of all entries; even counts use the mean of the two central values.
double median_all(const DenseMatrix& m);
double median(std::vector<double> values);

/// Standard normal quantile Φ⁻¹(q) for 0 < q < 1.
double inverse_normal_cdf(double q);

double normal_cdf(double z);
/// 1 − Φ(z) without cancellation for large z.
double normal_upper_tail(double z);

}  // namespace lrsd
