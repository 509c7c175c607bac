#pragma once

#include "svdls/error.hpp"
#include "svdls/matrix.hpp"

namespace svdls::kernels::detail {

inline void require_inner(const Matrix &a, const Matrix &b, std::size_t a_inner, std::size_t b_inner,
                          const char *what) {
    if (a_inner != b_inner) {
        throw DimensionError(std::string(what) + ": incompatible shapes " + a.shape_string() + " and " +
                             b.shape_string());
    }
}

inline double dot(const double *x, const double *y, std::size_t n) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += x[i] * y[i];
    }
    return s;
}

inline void axpy(double alpha, const double *x, double *y, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += alpha * x[i];
    }
}

} // namespace svdls::kernels::detail
