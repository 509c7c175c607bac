#include "kernels_common.hpp"
#include "svdls/kernels.hpp"

namespace svdls::kernels::serial {

Matrix matmul(const Matrix &a, const Matrix &b) {
    detail::require_inner(a, b, a.cols(), b.rows(), "matmul");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double *ci = c.row(i).data();
        for (std::size_t k = 0; k < a.cols(); ++k) {
            detail::axpy(a(i, k), b.row(k).data(), ci, b.cols());
        }
    }
    return c;
}

Matrix matmul_tn(const Matrix &a, const Matrix &b) {
    detail::require_inner(a, b, a.rows(), b.rows(), "matmul_tn");
    Matrix c(a.cols(), b.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) {
        double *ci = c.row(i).data();
        for (std::size_t n = 0; n < a.rows(); ++n) {
            detail::axpy(a(n, i), b.row(n).data(), ci, b.cols());
        }
    }
    return c;
}

Matrix gram(const Matrix &a) { return matmul_tn(a, a); }

void apply_reflector(std::span<double> colmajor, std::size_t col_len, std::size_t first, std::size_t ncols,
                     std::size_t offset, std::span<const double> v, double tau) {
    const std::size_t len = col_len - offset;
    for (std::size_t j = first; j < ncols; ++j) {
        double *x = colmajor.data() + j * col_len + offset;
        const double w = tau * detail::dot(v.data(), x, len);
        detail::axpy(-w, v.data(), x, len);
    }
}

} // namespace svdls::kernels::serial
