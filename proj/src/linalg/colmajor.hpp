#pragma once

#include "svdls/matrix.hpp"

#include <span>
#include <vector>

namespace svdls::detail {

// Column-major scratch copy of a matrix; factorizations walk columns.
struct ColMajor {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    ColMajor(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    explicit ColMajor(const Matrix &m) : ColMajor(m.rows(), m.cols()) {
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                data[j * rows + i] = m(i, j);
            }
        }
    }

    [[nodiscard]] std::span<double> col(std::size_t j) { return {data.data() + j * rows, rows}; }
    [[nodiscard]] std::span<const double> col(std::size_t j) const { return {data.data() + j * rows, rows}; }

    [[nodiscard]] Matrix to_matrix() const {
        Matrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                m(i, j) = data[j * rows + i];
            }
        }
        return m;
    }
};

} // namespace svdls::detail
