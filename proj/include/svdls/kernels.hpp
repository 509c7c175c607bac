#pragma once

// Dense kernels used by the factorizations and fits.
//
// Two implementations with identical signatures and identical results:
// `svdls::kernels` is OpenMP-parallel over output rows, `svdls::kernels::serial`
// is the plain single-threaded reference. Every output element is reduced in
// the same fixed order in both, so they agree bit for bit regardless of
// thread count.

#include "svdls/matrix.hpp"

#include <span>

namespace svdls::kernels {

/// a * b
[[nodiscard]] Matrix matmul(const Matrix &a, const Matrix &b);
/// a^T * b
[[nodiscard]] Matrix matmul_tn(const Matrix &a, const Matrix &b);
/// a^T * a (symmetric, both triangles filled)
[[nodiscard]] Matrix gram(const Matrix &a);

/// Apply the Householder reflector (I - tau v v^T) to columns [first, ncols)
/// of a column-major panel, where each column is `len` long and v starts at
/// offset `offset` within each column.
void apply_reflector(std::span<double> colmajor, std::size_t col_len, std::size_t first, std::size_t ncols,
                     std::size_t offset, std::span<const double> v, double tau);

/// Rotate column pairs (p, q) of a column-major panel by (c, s):
///   x_p' = c x_p - s x_q,  x_q' = s x_p + c x_q.
void rotate_columns(std::span<double> xp, std::span<double> xq, double c, double s) noexcept;

namespace serial {

[[nodiscard]] Matrix matmul(const Matrix &a, const Matrix &b);
[[nodiscard]] Matrix matmul_tn(const Matrix &a, const Matrix &b);
[[nodiscard]] Matrix gram(const Matrix &a);
void apply_reflector(std::span<double> colmajor, std::size_t col_len, std::size_t first, std::size_t ncols,
                     std::size_t offset, std::span<const double> v, double tau);

} // namespace serial

/// Threads OpenMP will use for the parallel kernels.
[[nodiscard]] int max_threads() noexcept;

} // namespace svdls::kernels
