#include "svdls/matrix.hpp"

#include "svdls/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace svdls {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) {
        throw DimensionError("matrix data length " + std::to_string(data_.size()) + " does not match shape " +
                             std::to_string(rows) + "x" + std::to_string(cols));
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) : rows_(rows.size()) {
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto &r : rows) {
        if (r.size() != cols_) {
            throw DimensionError("ragged matrix initializer");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

Matrix Matrix::left_columns(std::size_t n) const {
    if (n > cols_) {
        throw DimensionError("cannot take " + std::to_string(n) + " columns of a " + shape_string() + " matrix");
    }
    Matrix out(rows_, n);
    for (std::size_t i = 0; i < rows_; ++i) {
        std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_), n, out.row(i).begin());
    }
    return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
    Matrix out(indices.size(), cols_);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] >= rows_) {
            throw DimensionError("row index " + std::to_string(indices[i]) + " out of range for " + shape_string());
        }
        const auto src = row(indices[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

bool Matrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

std::string Matrix::shape_string() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

namespace {

void require_same_shape(const Matrix &a, const Matrix &b, const char *what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(what) + ": shapes " + a.shape_string() + " and " + b.shape_string() +
                             " differ");
    }
}

} // namespace

double frobenius_norm(const Matrix &a) {
    double s = 0.0;
    for (double x : a.data()) {
        s += x * x;
    }
    return std::sqrt(s);
}

double max_abs_diff(const Matrix &a, const Matrix &b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    }
    return m;
}

double relative_difference(const Matrix &a, const Matrix &b) {
    return frobenius_norm(a - b) / std::max(frobenius_norm(b), std::numeric_limits<double>::min());
}

Matrix operator-(const Matrix &a, const Matrix &b) {
    require_same_shape(a, b, "subtract");
    Matrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.data()[i] -= b.data()[i];
    }
    return out;
}

Matrix operator+(const Matrix &a, const Matrix &b) {
    require_same_shape(a, b, "add");
    Matrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.data()[i] += b.data()[i];
    }
    return out;
}

Matrix operator*(double s, const Matrix &a) {
    Matrix out = a;
    for (double &x : out.data()) {
        x *= s;
    }
    return out;
}

std::vector<double> column_means(const Matrix &a) {
    std::vector<double> mean(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto r = a.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) {
            mean[j] += r[j];
        }
    }
    if (a.rows() > 0) {
        for (double &m : mean) {
            m /= static_cast<double>(a.rows());
        }
    }
    return mean;
}

Matrix subtract_row_vector(const Matrix &a, std::span<const double> means) {
    if (means.size() != a.cols()) {
        throw DimensionError("row vector of length " + std::to_string(means.size()) + " does not match " +
                             a.shape_string());
    }
    Matrix out = a;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        auto r = out.row(i);
        for (std::size_t j = 0; j < out.cols(); ++j) {
            r[j] -= means[j];
        }
    }
    return out;
}

} // namespace svdls
