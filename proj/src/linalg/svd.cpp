#include "colmajor.hpp"
#include "kernels_common.hpp"
#include "svdls/error.hpp"
#include "svdls/linalg.hpp"
#include "svdls/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace svdls {

namespace {

constexpr int kMaxSweeps = 80;

void require_finite(const Matrix &a, const char *what) {
    if (!a.all_finite()) {
        throw NumericError(std::string(what) + ": input contains non-finite entries");
    }
}

// Largest-magnitude entry of every column of v made positive; u follows.
void apply_sign_convention(TruncatedSvd &f) {
    for (std::size_t c = 0; c < f.v.cols(); ++c) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t r = 0; r < f.v.rows(); ++r) {
            const double mag = std::abs(f.v(r, c));
            if (mag > best) {
                best = mag;
                arg = r;
            }
        }
        if (f.v(arg, c) < 0.0) {
            for (std::size_t r = 0; r < f.v.rows(); ++r) {
                f.v(r, c) = -f.v(r, c);
            }
            for (std::size_t r = 0; r < f.u.rows(); ++r) {
                f.u(r, c) = -f.u(r, c);
            }
        }
    }
}

// Replace the listed columns of u (column-major) with unit vectors orthogonal
// to every other column, drawn from the canonical basis by Gram-Schmidt.
void complete_basis(detail::ColMajor &u, const std::vector<bool> &missing) {
    const std::size_t m = u.rows;
    std::size_t candidate = 0;
    for (std::size_t j = 0; j < u.cols; ++j) {
        if (!missing[j]) {
            continue;
        }
        auto target = u.col(j);
        for (; candidate < m; ++candidate) {
            std::fill(target.begin(), target.end(), 0.0);
            target[candidate] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t i = 0; i < u.cols; ++i) {
                    if (i == j || (missing[i] && i > j)) {
                        continue;
                    }
                    const auto other = u.col(i);
                    const double proj = kernels::detail::dot(other.data(), target.data(), m);
                    kernels::detail::axpy(-proj, other.data(), target.data(), m);
                }
            }
            const double norm = std::sqrt(kernels::detail::dot(target.data(), target.data(), m));
            if (norm > 0.5) {
                for (double &x : target) {
                    x /= norm;
                }
                ++candidate;
                break;
            }
        }
    }
}

// One-sided (Hestenes) Jacobi on a square or tall matrix held column-major.
// On return the columns of `g` are mutually orthogonal; `v` accumulates the
// rotations.
void hestenes_jacobi(detail::ColMajor &g, detail::ColMajor &v) {
    const std::size_t m = g.rows;
    const std::size_t n = g.cols;
    const double tol = std::numeric_limits<double>::epsilon() * std::sqrt(static_cast<double>(m));
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                auto gp = g.col(p);
                auto gq = g.col(q);
                const double alpha = kernels::detail::dot(gp.data(), gp.data(), m);
                const double beta = kernels::detail::dot(gq.data(), gq.data(), m);
                const double gamma = kernels::detail::dot(gp.data(), gq.data(), m);
                if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) {
                    continue;
                }
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = c * t;
                kernels::rotate_columns(gp, gq, c, s);
                kernels::rotate_columns(v.col(p), v.col(q), c, s);
            }
        }
        if (!rotated) {
            return;
        }
    }
    throw NumericError("one-sided Jacobi SVD did not converge in " + std::to_string(kMaxSweeps) + " sweeps");
}

// Thin SVD of a square matrix by Jacobi.
TruncatedSvd jacobi_svd_square(const Matrix &a) {
    const std::size_t n = a.cols();
    detail::ColMajor g(a);
    detail::ColMajor v(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        v.col(j)[j] = 1.0;
    }
    hestenes_jacobi(g, v);

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto c = g.col(j);
        sigma[j] = std::sqrt(kernels::detail::dot(c.data(), c.data(), g.rows));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    detail::ColMajor u(g.rows, n);
    detail::ColMajor vs(n, n);
    std::vector<bool> missing(n, false);
    TruncatedSvd out;
    out.s.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.s[j] = sigma[src];
        std::copy_n(v.col(src).begin(), n, vs.col(j).begin());
        if (sigma[src] <= std::numeric_limits<double>::min()) {
            out.s[j] = 0.0;
            missing[j] = true;
            continue;
        }
        const auto gc = g.col(src);
        auto uc = u.col(j);
        for (std::size_t i = 0; i < g.rows; ++i) {
            uc[i] = gc[i] / sigma[src];
        }
    }
    if (std::find(missing.begin(), missing.end(), true) != missing.end()) {
        complete_basis(u, missing);
    }
    out.u = u.to_matrix();
    out.v = vs.to_matrix();
    return out;
}

// Thin SVD of a matrix with rows >= cols: QR first, then Jacobi on R.
TruncatedSvd svd_tall(const Matrix &a) {
    if (a.rows() == a.cols()) {
        return jacobi_svd_square(a);
    }
    const Matrix q = qr_orthonormalize(a).q;
    const Matrix r = kernels::matmul_tn(q, a);
    TruncatedSvd inner = jacobi_svd_square(r);
    inner.u = kernels::matmul(q, inner.u);
    return inner;
}

TruncatedSvd svd_any(const Matrix &a) {
    TruncatedSvd f;
    if (a.rows() >= a.cols()) {
        f = svd_tall(a);
    } else {
        f = svd_tall(a.transposed());
        std::swap(f.u, f.v);
    }
    apply_sign_convention(f);
    return f;
}

} // namespace

TruncatedSvd TruncatedSvd::truncated(std::size_t k) const {
    if (k > s.size()) {
        throw ArgumentError("cannot truncate a rank-" + std::to_string(s.size()) + " factorization to k=" +
                            std::to_string(k));
    }
    TruncatedSvd out;
    out.u = u.left_columns(k);
    out.v = v.left_columns(k);
    out.s.assign(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(k));
    return out;
}

Matrix TruncatedSvd::reconstruct() const {
    Matrix us = u;
    for (std::size_t i = 0; i < us.rows(); ++i) {
        for (std::size_t j = 0; j < us.cols(); ++j) {
            us(i, j) *= s[j];
        }
    }
    return kernels::matmul(us, v.transposed());
}

TruncatedSvd exact_svd(const Matrix &a) {
    const std::size_t small = std::min(a.rows(), a.cols());
    if (small > kExactSvdMaxDim) {
        throw ArgumentError("exact_svd is limited to min(rows, cols) <= " + std::to_string(kExactSvdMaxDim) +
                            " (got " + a.shape_string() + "); use randomized_svd for larger inputs");
    }
    if (small == 0) {
        throw DimensionError("exact_svd of an empty matrix");
    }
    require_finite(a, "exact_svd");
    return svd_any(a);
}

TruncatedSvd randomized_svd(const Matrix &a, std::size_t k, const RandomizedSvdParams &params) {
    const std::size_t small = std::min(a.rows(), a.cols());
    if (k < 1 || k > small) {
        throw ArgumentError("randomized_svd: k=" + std::to_string(k) + " must lie in [1, " + std::to_string(small) +
                            "] for a " + a.shape_string() + " matrix");
    }
    if (k + params.oversample > small) {
        throw ArgumentError("randomized_svd: k + oversample = " + std::to_string(k + params.oversample) +
                            " exceeds min(rows, cols) = " + std::to_string(small));
    }
    require_finite(a, "randomized_svd");

    const std::size_t width = k + params.oversample;
    Rng rng(params.seed);
    Matrix omega(a.cols(), width);
    for (double &x : omega.data()) {
        x = rng.normal();
    }

    Matrix q = qr_orthonormalize(kernels::matmul(a, omega)).q;
    for (std::size_t it = 0; it < params.power_iters; ++it) {
        const Matrix z = qr_orthonormalize(kernels::matmul_tn(a, q)).q;
        q = qr_orthonormalize(kernels::matmul(a, z)).q;
    }

    // B = Q^T A is width x cols; factor its transpose, which is tall.
    // B^T = Ub S Vb^T  =>  A ~ Q B = (Q Vb) S Ub^T.
    const Matrix bt = kernels::matmul_tn(a, q);
    TruncatedSvd small_f = svd_tall(bt);
    TruncatedSvd f;
    f.u = kernels::matmul(q, small_f.v);
    f.v = std::move(small_f.u);
    f.s = std::move(small_f.s);
    f = f.truncated(k);
    apply_sign_convention(f);
    return f;
}

std::string to_string(SvdMethod m) { return m == SvdMethod::exact ? "exact" : "randomized"; }

SvdMethod parse_svd_method(const std::string &s) {
    if (s == "exact") {
        return SvdMethod::exact;
    }
    if (s == "randomized") {
        return SvdMethod::randomized;
    }
    throw ArgumentError("unknown svd method '" + s + "' (expected exact or randomized)");
}

TruncatedSvd rayleigh_ritz(const Matrix &a, const TruncatedSvd &f) {
    if (a.cols() != f.v.rows()) {
        throw DimensionError("rayleigh_ritz: matrix " + a.shape_string() + " and right factor " +
                             f.v.shape_string());
    }
    const TruncatedSvd z = exact_svd(matmul(a, f.v));
    return {z.u, z.s, matmul(f.v, z.v)};
}

TruncatedSvd truncated_svd(const Matrix &a, std::size_t k, const SvdMode &mode) {
    const std::size_t small = std::min(a.rows(), a.cols());
    if (k < 1 || k > small) {
        throw ArgumentError("k=" + std::to_string(k) + " must lie in [1, " + std::to_string(small) + "] for a " +
                            a.shape_string() + " matrix");
    }
    if (mode.method == SvdMethod::exact) {
        return exact_svd(a).truncated(k);
    }
    RandomizedSvdParams p = mode.randomized;
    p.oversample = std::min(p.oversample, small - k);
    const TruncatedSvd f = randomized_svd(a, k, p);
    // the k x k rotation is only affordable below the exact-SVD cap
    return k <= kExactSvdMaxDim ? rayleigh_ritz(a, f) : f;
}

} // namespace svdls
