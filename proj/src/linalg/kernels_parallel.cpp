#include "kernels_common.hpp"
#include "svdls/kernels.hpp"

#include <algorithm>
#include <cstddef>

#include <omp.h>

namespace svdls::kernels {

namespace {

// Output rows handled together so each row of the right operand is loaded
// once per block instead of once per row.
constexpr std::size_t kRowBlock = 4;

} // namespace

Matrix matmul(const Matrix &a, const Matrix &b) {
    detail::require_inner(a, b, a.cols(), b.rows(), "matmul");
    Matrix c(a.rows(), b.cols());
    const std::size_t n = a.rows();
    const std::size_t inner = a.cols();
    const std::size_t width = b.cols();
    const auto nblocks = static_cast<std::ptrdiff_t>((n + kRowBlock - 1) / kRowBlock);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t blk = 0; blk < nblocks; ++blk) {
        const std::size_t i0 = static_cast<std::size_t>(blk) * kRowBlock;
        const std::size_t i1 = std::min(i0 + kRowBlock, n);
        for (std::size_t k = 0; k < inner; ++k) {
            const double *bk = b.row(k).data();
            for (std::size_t i = i0; i < i1; ++i) {
                detail::axpy(a(i, k), bk, c.row(i).data(), width);
            }
        }
    }
    return c;
}

Matrix matmul_tn(const Matrix &a, const Matrix &b) {
    detail::require_inner(a, b, a.rows(), b.rows(), "matmul_tn");
    Matrix c(a.cols(), b.cols());
    const std::size_t n = a.cols();
    const std::size_t inner = a.rows();
    const std::size_t width = b.cols();
    const auto nblocks = static_cast<std::ptrdiff_t>((n + kRowBlock - 1) / kRowBlock);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t blk = 0; blk < nblocks; ++blk) {
        const std::size_t i0 = static_cast<std::size_t>(blk) * kRowBlock;
        const std::size_t i1 = std::min(i0 + kRowBlock, n);
        for (std::size_t r = 0; r < inner; ++r) {
            const double *br = b.row(r).data();
            const double *ar = a.row(r).data();
            for (std::size_t i = i0; i < i1; ++i) {
                detail::axpy(ar[i], br, c.row(i).data(), width);
            }
        }
    }
    return c;
}

Matrix gram(const Matrix &a) { return matmul_tn(a, a); }

void apply_reflector(std::span<double> colmajor, std::size_t col_len, std::size_t first, std::size_t ncols,
                     std::size_t offset, std::span<const double> v, double tau) {
    const std::size_t len = col_len - offset;
    const auto last = static_cast<std::ptrdiff_t>(ncols);

#pragma omp parallel for schedule(static) if ((ncols - first) * len > 32768)
    for (std::ptrdiff_t j = static_cast<std::ptrdiff_t>(first); j < last; ++j) {
        double *x = colmajor.data() + static_cast<std::size_t>(j) * col_len + offset;
        const double w = tau * detail::dot(v.data(), x, len);
        detail::axpy(-w, v.data(), x, len);
    }
}

void rotate_columns(std::span<double> xp, std::span<double> xq, double c, double s) noexcept {
    const std::size_t n = xp.size();
    double *p = xp.data();
    double *q = xq.data();
    for (std::size_t i = 0; i < n; ++i) {
        const double a = p[i];
        const double b = q[i];
        p[i] = c * a - s * b;
        q[i] = s * a + c * b;
    }
}

int max_threads() noexcept { return omp_get_max_threads(); }

} // namespace svdls::kernels
