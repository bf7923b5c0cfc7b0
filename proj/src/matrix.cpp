#include "lrsd/matrix.hpp"

#include "lrsd/error.hpp"

#include <utility>

namespace lrsd {

namespace {

void check_labels(const Labels& labels, Index expected, const char* which)
{
    if (!labels.empty() && static_cast<Index>(labels.size()) != expected) {
        fail(Errc::shape_mismatch, std::string(which) + " label count " + std::to_string(labels.size()) +
                                       " does not match dimension " + std::to_string(expected));
    }
}

}  // namespace

DenseMatrix::DenseMatrix(Index rows, Index cols)
{
    if (rows < 0 || cols < 0) {
        fail(Errc::invalid_argument, "matrix dimensions must be non-negative");
    }
    values_ = Eigen::MatrixXd::Zero(rows, cols);
}

DenseMatrix::DenseMatrix(Eigen::MatrixXd values, Labels row_labels, Labels col_labels)
    : values_(std::move(values)), row_labels_(std::move(row_labels)), col_labels_(std::move(col_labels))
{
    if (!values_.allFinite()) {
        fail(Errc::domain, "matrix contains non-finite entries");
    }
    check_labels(row_labels_, values_.rows(), "row");
    check_labels(col_labels_, values_.cols(), "column");
}

DenseMatrix DenseMatrix::from_row_major(Index rows, Index cols, const std::vector<double>& values)
{
    if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != values.size()) {
        fail(Errc::shape_mismatch, "value count " + std::to_string(values.size()) + " does not equal " +
                                       std::to_string(rows) + "x" + std::to_string(cols));
    }
    Eigen::MatrixXd m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            m(i, j) = values[static_cast<std::size_t>(i * cols + j)];
        }
    }
    return DenseMatrix(std::move(m));
}

DenseMatrix DenseMatrix::zeros_like(const DenseMatrix& other)
{
    return DenseMatrix(Eigen::MatrixXd::Zero(other.rows(), other.cols()), other.row_labels(), other.col_labels());
}

DenseMatrix DenseMatrix::with_labels_of(const DenseMatrix& other) const
{
    require_same_shape(*this, other, "with_labels_of");
    DenseMatrix out = *this;
    out.row_labels_ = other.row_labels_;
    out.col_labels_ = other.col_labels_;
    return out;
}

void DenseMatrix::set_labels(Labels row_labels, Labels col_labels)
{
    check_labels(row_labels, rows(), "row");
    check_labels(col_labels, cols(), "column");
    row_labels_ = std::move(row_labels);
    col_labels_ = std::move(col_labels);
}

std::vector<double> DenseMatrix::to_row_major() const
{
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (Index i = 0; i < rows(); ++i) {
        for (Index j = 0; j < cols(); ++j) {
            out.push_back(values_(i, j));
        }
    }
    return out;
}

bool same_shape(const DenseMatrix& a, const DenseMatrix& b) noexcept
{
    return a.rows() == b.rows() && a.cols() == b.cols();
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* context)
{
    if (!same_shape(a, b)) {
        fail(Errc::shape_mismatch, std::string(context) + ": shapes " + std::to_string(a.rows()) + "x" +
                                       std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                                       std::to_string(b.cols()) + " differ");
    }
}

Mask to_mask(const DenseMatrix& m)
{
    return m.values().array() != 0.0;
}

DenseMatrix from_mask(const Mask& mask)
{
    return DenseMatrix(mask.cast<double>().matrix());
}

}  // namespace lrsd
