#pragma once

#include "svdls/kernels.hpp"
#include "svdls/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace svdls {

using kernels::matmul;
using kernels::matmul_tn;

/// Orthonormal basis from a Householder QR.
struct QrResult {
    Matrix q;
    /// Columns whose residual norm fell below the rank threshold; the
    /// corresponding column of q is a completion direction orthogonal to
    /// the preceding columns rather than part of span(a).
    std::vector<std::size_t> degenerate_columns;

    [[nodiscard]] bool rank_deficient() const noexcept { return !degenerate_columns.empty(); }
};

/// Thin Q (same shape as `a`) with Q^T Q = I. Requires a.rows() >= a.cols().
[[nodiscard]] QrResult qr_orthonormalize(const Matrix &a);

/// Factor triple (U_k, s_k, V_k).
///
/// Singular values are non-increasing and each right singular vector has
/// its largest-magnitude entry positive (the matching left vector is
/// flipped with it).
struct TruncatedSvd {
    Matrix u;              ///< rows x k
    std::vector<double> s; ///< k values, non-increasing
    Matrix v;              ///< cols x k

    [[nodiscard]] std::size_t k() const noexcept { return s.size(); }
    /// First `k` components.
    [[nodiscard]] TruncatedSvd truncated(std::size_t k) const;
    /// u * diag(s) * v^T
    [[nodiscard]] Matrix reconstruct() const;
};

inline constexpr std::size_t kExactSvdMaxDim = 2048;

/// Full thin SVD (k = min(rows, cols)) by one-sided Jacobi.
[[nodiscard]] TruncatedSvd exact_svd(const Matrix &a);

struct RandomizedSvdParams {
    std::size_t oversample = 10;
    std::size_t power_iters = 4;
    std::uint64_t seed = 0;
};

/// Halko-Martinsson-Tropp range finder with subspace power iterations.
[[nodiscard]] TruncatedSvd randomized_svd(const Matrix &a, std::size_t k, const RandomizedSvdParams &params = {});

enum class SvdMethod { exact, randomized };

struct SvdMode {
    SvdMethod method = SvdMethod::randomized;
    RandomizedSvdParams randomized{};

    [[nodiscard]] static SvdMode exact() { return {SvdMethod::exact, {}}; }
};

[[nodiscard]] std::string to_string(SvdMethod m);
[[nodiscard]] SvdMethod parse_svd_method(const std::string &s);

/// Re-diagonalize a factorization against `a` within the span of f.v:
/// Z = a V is factored exactly, Z = U S W^T, and V becomes V W. Afterwards
/// (a V)^T (a V) = diag(s^2) holds to rounding even when V is approximate.
[[nodiscard]] TruncatedSvd rayleigh_ritz(const Matrix &a, const TruncatedSvd &f);

/// Top-k SVD via the selected method. For the randomized path the
/// oversampling is reduced if k + oversample would exceed min(rows, cols),
/// and the result is passed through rayleigh_ritz.
[[nodiscard]] TruncatedSvd truncated_svd(const Matrix &a, std::size_t k, const SvdMode &mode);

/// Solve S X = B for symmetric positive definite S by Cholesky.
/// Throws SingularityError when a pivot falls below rel_pivot * max diag(S).
[[nodiscard]] Matrix cholesky_solve(const Matrix &s, const Matrix &b, double rel_pivot = 1e-12);

/// Solve A X = B by Gaussian elimination with partial pivoting.
/// Throws SingularityError when a pivot falls below rel_pivot * max |A_ij|.
[[nodiscard]] Matrix lu_solve(const Matrix &a, const Matrix &b, double rel_pivot = 1e-12);

} // namespace svdls
