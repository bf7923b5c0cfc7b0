#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace lrsd {

using Index = Eigen::Index;
using Labels = std::vector<std::string>;

/// Boolean matrix used for detection calls, ground truth and imputation flags.
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Real n×p matrix with optional row/column identifiers.
///
/// Every entry is finite; construction rejects NaN and Inf. Labels are either
/// empty or exactly as long as the corresponding dimension.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(Index rows, Index cols);
    explicit DenseMatrix(Eigen::MatrixXd values, Labels row_labels = {}, Labels col_labels = {});

    /// Builds a matrix from values listed row by row.
    static DenseMatrix from_row_major(Index rows, Index cols, const std::vector<double>& values);
    static DenseMatrix zeros_like(const DenseMatrix& other);

    Index rows() const noexcept { return values_.rows(); }
    Index cols() const noexcept { return values_.cols(); }
    Index size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.size() == 0; }

    double operator()(Index i, Index j) const { return values_(i, j); }
    const Eigen::MatrixXd& values() const noexcept { return values_; }

    const Labels& row_labels() const noexcept { return row_labels_; }
    const Labels& col_labels() const noexcept { return col_labels_; }
    bool has_row_labels() const noexcept { return !row_labels_.empty(); }
    bool has_col_labels() const noexcept { return !col_labels_.empty(); }

    /// Returns a copy carrying `other`'s labels (shapes must agree).
    DenseMatrix with_labels_of(const DenseMatrix& other) const;
    void set_labels(Labels row_labels, Labels col_labels);

    std::vector<double> to_row_major() const;

private:
    Eigen::MatrixXd values_;
    Labels row_labels_;
    Labels col_labels_;
};

bool same_shape(const DenseMatrix& a, const DenseMatrix& b) noexcept;
void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* context);

/// Converts a 0/1 (or zero/nonzero) matrix into a mask.
Mask to_mask(const DenseMatrix& m);
DenseMatrix from_mask(const Mask& mask);

}  // namespace lrsd
