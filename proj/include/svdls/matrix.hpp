#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace svdls {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    double &operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    [[nodiscard]] std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    [[nodiscard]] std::span<const double> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }

    [[nodiscard]] std::span<double> data() noexcept { return data_; }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    [[nodiscard]] Matrix transposed() const;
    /// First `n` columns.
    [[nodiscard]] Matrix left_columns(std::size_t n) const;
    /// Rows picked by index, in the given order.
    [[nodiscard]] Matrix select_rows(std::span<const std::size_t> indices) const;

    [[nodiscard]] bool all_finite() const noexcept;
    [[nodiscard]] std::string shape_string() const;

    friend bool operator==(const Matrix &, const Matrix &) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

[[nodiscard]] double frobenius_norm(const Matrix &a);
/// max |a_ij - b_ij|; shapes must agree.
[[nodiscard]] double max_abs_diff(const Matrix &a, const Matrix &b);
/// ||a - b||_F / max(||b||_F, tiny).
[[nodiscard]] double relative_difference(const Matrix &a, const Matrix &b);

[[nodiscard]] Matrix operator-(const Matrix &a, const Matrix &b);
[[nodiscard]] Matrix operator+(const Matrix &a, const Matrix &b);
[[nodiscard]] Matrix operator*(double s, const Matrix &a);

/// Column means (length cols).
[[nodiscard]] std::vector<double> column_means(const Matrix &a);
/// a with `means` subtracted from every row.
[[nodiscard]] Matrix subtract_row_vector(const Matrix &a, std::span<const double> means);

} // namespace svdls
