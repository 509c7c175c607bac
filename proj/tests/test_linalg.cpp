#include "support/oracles.hpp"

#include "svdls/error.hpp"
#include "svdls/kernels.hpp"
#include "svdls/linalg.hpp"
#include "svdls/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace svdls;

namespace {

double orthonormality_error(const Matrix &q) {
    return max_abs_diff(oracle::naive_matmul(q.transposed(), q), Matrix::identity(q.cols()));
}

} // namespace

TEST_CASE("rng is reproducible and roughly standard normal") {
    Rng a(42);
    Rng b(42);
    double sum = 0.0;
    double sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double x = a.normal();
        CHECK(x == b.normal());
        sum += x;
        sq += x * x;
    }
    CHECK(std::abs(sum / n) < 0.03);
    CHECK(std::abs(sq / n - 1.0) < 0.05);
    Rng c(1);
    for (int i = 0; i < 1000; ++i) {
        CHECK(c.below(7) < 7);
    }
}

TEST_CASE("matmul hand-checked cases") {
    const Matrix a{{1, 2}, {3, 4}};
    CHECK(matmul(a, Matrix{{1}, {1}}) == Matrix{{3}, {7}});
    const Matrix r = oracle::random_matrix(3, 5, 1);
    CHECK(matmul(Matrix::identity(3), r) == r);
}

TEST_CASE("matmul rejects incompatible shapes with both shapes in the message") {
    try {
        (void)matmul(Matrix(2, 3), Matrix(4, 2));
        FAIL("expected DimensionError");
    } catch (const DimensionError &e) {
        const std::string msg = e.what();
        CHECK(msg.find("2x3") != std::string::npos);
        CHECK(msg.find("4x2") != std::string::npos);
    }
    CHECK_THROWS_AS((void)matmul_tn(Matrix(2, 3), Matrix(4, 2)), DimensionError);
}

TEST_CASE("matmul matches the naive triple loop") {
    const Matrix a = oracle::random_matrix(7, 5, 11);
    const Matrix b = oracle::random_matrix(5, 3, 12);
    CHECK(relative_difference(matmul(a, b), oracle::naive_matmul(a, b)) <= 1e-12);
}

TEST_CASE("property: parallel and serial kernels agree bit for bit and match the oracle") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        std::mt19937_64 g(seed);
        std::uniform_int_distribution<std::size_t> dim(1, 32);
        const std::size_t r = dim(g);
        const std::size_t inner = dim(g);
        const std::size_t c = dim(g);
        const Matrix a = oracle::random_matrix(r, inner, seed * 3 + 1);
        const Matrix b = oracle::random_matrix(inner, c, seed * 3 + 2);
        const Matrix p = kernels::matmul(a, b);
        CHECK(p == kernels::serial::matmul(a, b));
        CHECK(relative_difference(p, oracle::naive_matmul(a, b)) <= 1e-12);

        const Matrix bt = oracle::random_matrix(r, c, seed * 3 + 3);
        const Matrix tn = kernels::matmul_tn(a, bt);
        CHECK(tn == kernels::serial::matmul_tn(a, bt));
        CHECK(relative_difference(tn, oracle::naive_matmul(a.transposed(), bt)) <= 1e-12);
        CHECK(kernels::gram(a) == kernels::serial::gram(a));

        // (AB)C = A(BC)
        const Matrix cc = oracle::random_matrix(c, 4, seed * 3 + 4);
        CHECK(relative_difference(matmul(matmul(a, b), cc), matmul(a, matmul(b, cc))) <= 1e-12);
    }
}

TEST_CASE("qr of a single column normalizes it") {
    const QrResult r = qr_orthonormalize(Matrix{{3}, {4}});
    CHECK(!r.rank_deficient());
    CHECK(std::abs(std::abs(r.q(0, 0)) - 0.6) < 1e-15);
    CHECK(std::abs(std::abs(r.q(1, 0)) - 0.8) < 1e-15);
    CHECK(r.q(0, 0) * r.q(1, 0) > 0.0);
}

TEST_CASE("qr of an orthonormal input spans the same space") {
    const Matrix q0 = qr_orthonormalize(oracle::random_matrix(9, 3, 5)).q;
    const Matrix q1 = qr_orthonormalize(q0).q;
    CHECK(orthonormality_error(q1) <= 1e-12);
    // Positive-diagonal convention recovers q0 itself.
    CHECK(max_abs_diff(q0, q1) <= 1e-12);
}

TEST_CASE("qr of a random tall matrix: orthonormal columns and exact projector") {
    const Matrix a = oracle::random_matrix(10, 4, 21);
    const Matrix q = qr_orthonormalize(a).q;
    CHECK(orthonormality_error(q) <= 1e-10);
    const Matrix proj = oracle::naive_matmul(q, oracle::naive_matmul(q.transposed(), a));
    CHECK(max_abs_diff(proj, a) <= 1e-9);
}

TEST_CASE("qr flags rank deficiency and still returns orthonormal columns") {
    Matrix a = oracle::random_matrix(8, 4, 3);
    for (std::size_t i = 0; i < 8; ++i) {
        a(i, 2) = 2.0 * a(i, 0) - a(i, 1);
    }
    const QrResult r = qr_orthonormalize(a);
    REQUIRE(r.rank_deficient());
    CHECK(r.degenerate_columns == std::vector<std::size_t>{2});
    CHECK(orthonormality_error(r.q) <= 1e-10);

    const QrResult z = qr_orthonormalize(Matrix(5, 2));
    CHECK(z.degenerate_columns.size() == 2);
    CHECK(orthonormality_error(z.q) <= 1e-12);
    CHECK_THROWS_AS((void)qr_orthonormalize(Matrix(2, 3)), DimensionError);
}

TEST_CASE("exact svd of a diagonal matrix") {
    const Matrix a{{3, 0, 0}, {0, 2, 0}, {0, 0, 1}};
    const TruncatedSvd f = exact_svd(a);
    CHECK(f.s == std::vector<double>{3, 2, 1});
    CHECK(max_abs_diff(f.v, Matrix::identity(3)) == 0.0);
    CHECK(max_abs_diff(f.u, Matrix::identity(3)) == 0.0);

    const Matrix perm{{0, 0, 1}, {0, -2, 0}, {5, 0, 0}};
    const TruncatedSvd g = exact_svd(perm);
    CHECK(g.s == std::vector<double>{5, 2, 1});
    CHECK(max_abs_diff(g.reconstruct(), perm) <= 1e-15);
}

TEST_CASE("exact svd of the identity") {
    const TruncatedSvd f = exact_svd(Matrix::identity(4));
    CHECK(f.s == std::vector<double>{1, 1, 1, 1});
}

TEST_CASE("exact svd of random matrices against the Gram-eigenvalue oracle") {
    for (auto [r, c] : {std::pair{6, 4}, std::pair{4, 6}, std::pair{5, 5}, std::pair{30, 7}}) {
        const Matrix a = oracle::random_matrix(r, c, 100 + r * 10 + c);
        const TruncatedSvd f = exact_svd(a);
        REQUIRE(f.k() == static_cast<std::size_t>(std::min(r, c)));
        CHECK(max_abs_diff(f.reconstruct(), a) <= 1e-10);
        const auto ref = oracle::gram_singular_values(a);
        for (std::size_t i = 0; i < f.k(); ++i) {
            CHECK(std::abs(f.s[i] - ref[i]) <= 1e-9);
        }
        CHECK(orthonormality_error(f.u) <= 1e-8);
        CHECK(orthonormality_error(f.v) <= 1e-8);
        for (std::size_t i = 1; i < f.k(); ++i) {
            CHECK(f.s[i - 1] >= f.s[i]);
        }
        // sign rule: largest-magnitude entry of each right vector is positive
        for (std::size_t j = 0; j < f.k(); ++j) {
            double big = 0.0;
            for (std::size_t i = 0; i < f.v.rows(); ++i) {
                if (std::abs(f.v(i, j)) > std::abs(big)) {
                    big = f.v(i, j);
                }
            }
            CHECK(big > 0.0);
        }
    }
}

TEST_CASE("property: truncation error equals the tail of the spectrum") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Matrix a = oracle::random_matrix(12, 8, 500 + seed);
        const TruncatedSvd f = exact_svd(a);
        for (std::size_t k = 1; k < f.k(); ++k) {
            double tail = 0.0;
            for (std::size_t i = k; i < f.k(); ++i) {
                tail += f.s[i] * f.s[i];
            }
            CHECK(std::abs(frobenius_norm(a - f.truncated(k).reconstruct()) - std::sqrt(tail)) <= 1e-9);
        }
    }
}

TEST_CASE("exact svd of a rank-deficient matrix keeps orthonormal factors") {
    const std::vector<double> sigma{4.0, 1.0};
    const Matrix a = oracle::with_spectrum(7, 5, sigma, 9);
    const TruncatedSvd f = exact_svd(a);
    CHECK(std::abs(f.s[0] - 4.0) <= 1e-12);
    CHECK(std::abs(f.s[1] - 1.0) <= 1e-12);
    for (std::size_t i = 2; i < f.k(); ++i) {
        CHECK(f.s[i] <= 1e-14);
    }
    CHECK(orthonormality_error(f.u) <= 1e-8);
    CHECK(orthonormality_error(f.v) <= 1e-8);
    CHECK(max_abs_diff(f.reconstruct(), a) <= 1e-12);

    const TruncatedSvd z = exact_svd(Matrix(4, 3));
    CHECK(z.s == std::vector<double>{0, 0, 0});
    CHECK(orthonormality_error(z.u) <= 1e-12);
}

TEST_CASE("exact svd rejects oversized input and points at randomized_svd") {
    try {
        (void)exact_svd(Matrix(kExactSvdMaxDim + 1, kExactSvdMaxDim + 1));
        FAIL("expected ArgumentError");
    } catch (const ArgumentError &e) {
        CHECK(std::string(e.what()).find("randomized_svd") != std::string::npos);
    }
    Matrix bad(3, 2);
    bad(1, 1) = std::nan("");
    CHECK_THROWS_AS((void)exact_svd(bad), NumericError);
}

TEST_CASE("randomized svd recovers a rank-k matrix exactly") {
    const std::vector<double> sigma{9.0, 5.0, 2.0, 0.5};
    const Matrix a = oracle::with_spectrum(60, 40, sigma, 3);
    const TruncatedSvd r = randomized_svd(a, 4, {6, 2, 17});
    const TruncatedSvd e = exact_svd(a).truncated(4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(r.s[i] - e.s[i]) <= 1e-10);
    }
    CHECK(max_abs_diff(r.v, e.v) <= 1e-8);
}

TEST_CASE("randomized svd on a 2^-i spectrum matches exact svd to relative 1e-6") {
    std::vector<double> sigma(100);
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        sigma[i] = std::pow(2.0, -static_cast<double>(i));
    }
    const Matrix a = oracle::with_spectrum(200, 100, sigma, 77);
    const TruncatedSvd r = randomized_svd(a, 10, {10, 4, 5});
    const TruncatedSvd e = exact_svd(a);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(std::abs(r.s[i] - e.s[i]) / e.s[i] <= 1e-6);
    }
    CHECK(orthonormality_error(r.u) <= 1e-8);
    CHECK(orthonormality_error(r.v) <= 1e-8);
}

TEST_CASE("randomized svd is deterministic for a fixed seed") {
    const Matrix a = oracle::random_matrix(50, 30, 8);
    const TruncatedSvd x = randomized_svd(a, 5, {10, 4, 123});
    const TruncatedSvd y = randomized_svd(a, 5, {10, 4, 123});
    CHECK(x.u == y.u);
    CHECK(x.v == y.v);
    CHECK(x.s == y.s);
    const TruncatedSvd z = randomized_svd(a, 5, {10, 4, 124});
    CHECK(!(z.u == x.u));
}

TEST_CASE("randomized svd argument errors") {
    const Matrix a = oracle::random_matrix(20, 10, 1);
    CHECK_THROWS_AS((void)randomized_svd(a, 0), ArgumentError);
    CHECK_THROWS_AS((void)randomized_svd(a, 11, {0, 0, 0}), ArgumentError);
    CHECK_THROWS_AS((void)randomized_svd(a, 5, {6, 0, 0}), ArgumentError);
    Matrix bad = a;
    bad(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS((void)randomized_svd(bad, 2, {2, 1, 0}), NumericError);
    // truncated_svd shrinks the oversampling instead of failing
    const TruncatedSvd f = truncated_svd(a, 8, SvdMode{});
    CHECK(f.k() == 8);
}

TEST_CASE("cholesky and lu solves match the Gauss-Jordan oracle") {
    const Matrix x = oracle::random_matrix(30, 6, 2);
    Matrix s = oracle::naive_matmul(x.transposed(), x);
    const Matrix b = oracle::random_matrix(6, 2, 3);
    const Matrix ref = oracle::gauss_jordan_solve(s, b);
    CHECK(relative_difference(cholesky_solve(s, b), ref) <= 1e-12);
    CHECK(relative_difference(lu_solve(s, b), ref) <= 1e-12);
    CHECK_THROWS_AS((void)cholesky_solve(Matrix(3, 3), Matrix(3, 1)), SingularityError);
    CHECK_THROWS_AS((void)lu_solve(Matrix(3, 3), Matrix(3, 1)), SingularityError);
}

TEST_CASE("rayleigh-ritz step diagonalizes the projected Gram matrix on a flat spectrum") {
    const Matrix a = oracle::random_matrix(300, 64, 31);
    const TruncatedSvd raw = randomized_svd(a, 16, {10, 1, 2});
    const TruncatedSvd f = rayleigh_ritz(a, raw);
    const Matrix z = oracle::naive_matmul(a, f.v);
    const Matrix g = oracle::naive_matmul(z.transposed(), z);
    double off = 0.0;
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(std::abs(g(i, i) - f.s[i] * f.s[i]) / (f.s[i] * f.s[i]) <= 1e-9);
        for (std::size_t j = 0; j < 16; ++j) {
            if (i != j) {
                off = std::max(off, std::abs(g(i, j)));
            }
        }
    }
    CHECK(off <= 1e-8 * g(0, 0));
    CHECK(orthonormality_error(f.v) <= 1e-10);
    // same subspace: projectors agree
    CHECK(max_abs_diff(oracle::naive_matmul(f.v, f.v.transposed()),
                       oracle::naive_matmul(raw.v, raw.v.transposed())) <= 1e-10);
    // U S is exactly a V
    Matrix us = f.u;
    for (std::size_t i = 0; i < us.rows(); ++i) {
        for (std::size_t j = 0; j < us.cols(); ++j) {
            us(i, j) *= f.s[j];
        }
    }
    CHECK(max_abs_diff(us, z) <= 1e-10);
    CHECK_THROWS_AS((void)rayleigh_ritz(Matrix(5, 3), raw), DimensionError);
}
