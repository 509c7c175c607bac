#include "svdls/error.hpp"
#include "svdls/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace svdls {

namespace {

void require_square_rhs(const Matrix &a, const Matrix &b, const char *what) {
    if (a.rows() != a.cols() || b.rows() != a.rows()) {
        throw DimensionError(std::string(what) + ": need square system and matching right-hand side, got " +
                             a.shape_string() + " and " + b.shape_string());
    }
}

} // namespace

Matrix cholesky_solve(const Matrix &s, const Matrix &b, double rel_pivot) {
    require_square_rhs(s, b, "cholesky_solve");
    const std::size_t n = s.rows();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        max_diag = std::max(max_diag, std::abs(s(i, i)));
    }
    const double floor = rel_pivot * max_diag;

    // Lower factor L with S = L L^T.
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = s(j, j);
        for (std::size_t k = 0; k < j; ++k) {
            d -= l(j, k) * l(j, k);
        }
        if (!(d > floor)) {
            throw SingularityError("cholesky_solve: pivot " + std::to_string(j) + " is " + std::to_string(d) +
                                   ", below threshold " + std::to_string(floor));
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double x = s(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                x -= l(i, k) * l(j, k);
            }
            l(i, j) = x / ljj;
        }
    }

    Matrix x = b;
    const std::size_t m = b.cols();
    for (std::size_t i = 0; i < n; ++i) {
        auto xi = x.row(i);
        for (std::size_t k = 0; k < i; ++k) {
            const auto xk = x.row(k);
            for (std::size_t c = 0; c < m; ++c) {
                xi[c] -= l(i, k) * xk[c];
            }
        }
        for (double &v : xi) {
            v /= l(i, i);
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        auto xi = x.row(i);
        for (std::size_t k = i + 1; k < n; ++k) {
            const auto xk = x.row(k);
            for (std::size_t c = 0; c < m; ++c) {
                xi[c] -= l(k, i) * xk[c];
            }
        }
        for (double &v : xi) {
            v /= l(i, i);
        }
    }
    return x;
}

Matrix lu_solve(const Matrix &a, const Matrix &b, double rel_pivot) {
    require_square_rhs(a, b, "lu_solve");
    const std::size_t n = a.rows();
    const std::size_t m = b.cols();
    Matrix lu = a;
    Matrix x = b;
    double scale = 0.0;
    for (double v : a.data()) {
        scale = std::max(scale, std::abs(v));
    }
    const double floor = rel_pivot * scale;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(lu(r, col)) > std::abs(lu(piv, col))) {
                piv = r;
            }
        }
        if (!(std::abs(lu(piv, col)) > floor)) {
            throw SingularityError("lu_solve: pivot in column " + std::to_string(col) + " is " +
                                   std::to_string(lu(piv, col)) + ", below threshold " + std::to_string(floor));
        }
        if (piv != col) {
            std::swap_ranges(lu.row(col).begin(), lu.row(col).end(), lu.row(piv).begin());
            std::swap_ranges(x.row(col).begin(), x.row(col).end(), x.row(piv).begin());
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = lu(r, col) / lu(col, col);
            if (f == 0.0) {
                continue;
            }
            for (std::size_t c = col; c < n; ++c) {
                lu(r, c) -= f * lu(col, c);
            }
            for (std::size_t c = 0; c < m; ++c) {
                x(r, c) -= f * x(col, c);
            }
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t k = i + 1; k < n; ++k) {
            for (std::size_t c = 0; c < m; ++c) {
                x(i, c) -= lu(i, k) * x(k, c);
            }
        }
        for (std::size_t c = 0; c < m; ++c) {
            x(i, c) /= lu(i, i);
        }
    }
    return x;
}

} // namespace svdls
