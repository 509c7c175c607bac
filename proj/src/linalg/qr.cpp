#include "colmajor.hpp"
#include "kernels_common.hpp"
#include "svdls/error.hpp"
#include "svdls/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace svdls {

namespace {

constexpr double kRankTolerance = 1e-12;

} // namespace

QrResult qr_orthonormalize(const Matrix &a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (m < n) {
        throw DimensionError("qr_orthonormalize needs rows >= cols, got " + a.shape_string());
    }

    detail::ColMajor w(a);
    double max_norm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const auto c = w.col(j);
        max_norm = std::max(max_norm, std::sqrt(kernels::detail::dot(c.data(), c.data(), m)));
    }
    const double threshold = kRankTolerance * max_norm;

    // Reflector j is stored in rows [j, m) of column j of `w`; R's diagonal
    // is kept separately.
    std::vector<double> tau(n, 0.0);
    std::vector<double> diag(n, 0.0);
    QrResult result;

    for (std::size_t j = 0; j < n; ++j) {
        double *x = w.col(j).data() + j;
        const std::size_t len = m - j;
        const double norm = std::sqrt(kernels::detail::dot(x, x, len));
        if (norm <= threshold) {
            result.degenerate_columns.push_back(j);
            std::fill(x, x + len, 0.0);
            continue;
        }
        const double alpha = x[0] > 0.0 ? -norm : norm;
        x[0] -= alpha;
        const double vnorm2 = kernels::detail::dot(x, x, len);
        tau[j] = 2.0 / vnorm2;
        diag[j] = alpha;
        kernels::apply_reflector(w.data, m, j + 1, n, j, std::span<const double>(x, len), tau[j]);
    }

    // Q = H_0 H_1 ... H_{n-1} [I_n; 0], accumulated backwards. Columns left
    // of j are still unit vectors when H_j is applied, so only [j, n) change.
    detail::ColMajor q(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        q.col(j)[j] = 1.0;
    }
    for (std::size_t jj = n; jj-- > 0;) {
        if (tau[jj] == 0.0) {
            continue;
        }
        const double *v = w.col(jj).data() + jj;
        kernels::apply_reflector(q.data, m, jj, n, jj, std::span<const double>(v, m - jj), tau[jj]);
    }
    // Make R's diagonal positive so Q is unique for full-rank input.
    for (std::size_t j = 0; j < n; ++j) {
        if (diag[j] < 0.0) {
            for (double &x : q.col(j)) {
                x = -x;
            }
        }
    }
    result.q = q.to_matrix();
    return result;
}

} // namespace svdls
