// Times the OpenMP kernels against the serial reference and checks that
// both produce bit-identical output.
//
//   bench_kernels [--quick]

#include "svdls/kernels.hpp"
#include "svdls/linalg.hpp"
#include "svdls/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <vector>

namespace {

using svdls::Matrix;

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
    svdls::Rng rng(seed);
    Matrix m(r, c);
    for (double &x : m.data()) {
        x = rng.normal();
    }
    return m;
}

double best_of(int reps, const std::function<void()> &f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

bool report(const char *name, double flops, double serial_s, double parallel_s, bool identical) {
    std::printf("%-28s serial %8.4f s (%6.2f GFLOP/s)  parallel %8.4f s (%6.2f GFLOP/s)  x%5.2f  %s\n", name,
                serial_s, flops / serial_s * 1e-9, parallel_s, flops / parallel_s * 1e-9, serial_s / parallel_s,
                identical ? "bit-identical" : "MISMATCH");
    return identical;
}

} // namespace

int main(int argc, char **argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    const std::size_t n = quick ? 400 : 4000;
    const std::size_t d = quick ? 96 : 768;
    const std::size_t l = quick ? 24 : 138;
    const int reps = quick ? 1 : 3;
    std::printf("threads: %d  shapes: A %zux%zu, panel width %zu\n", svdls::kernels::max_threads(), n, d, l);

    const Matrix a = random_matrix(n, d, 1);
    const Matrix omega = random_matrix(d, l, 2);
    const Matrix q = random_matrix(n, l, 3);
    bool ok = true;

    {
        Matrix s;
        Matrix p;
        const double ts = best_of(reps, [&] { s = svdls::kernels::serial::matmul(a, omega); });
        const double tp = best_of(reps, [&] { p = svdls::kernels::matmul(a, omega); });
        ok &= report("matmul A*Omega", 2.0 * n * d * l, ts, tp, s == p);
    }
    {
        Matrix s;
        Matrix p;
        const double ts = best_of(reps, [&] { s = svdls::kernels::serial::matmul_tn(a, q); });
        const double tp = best_of(reps, [&] { p = svdls::kernels::matmul_tn(a, q); });
        ok &= report("matmul_tn A^T*Q", 2.0 * n * d * l, ts, tp, s == p);
    }
    {
        Matrix s;
        Matrix p;
        const double ts = best_of(reps, [&] { s = svdls::kernels::serial::gram(q); });
        const double tp = best_of(reps, [&] { p = svdls::kernels::gram(q); });
        ok &= report("gram Q^T*Q", 2.0 * n * l * l, ts, tp, s == p);
    }
    {
        // One Householder sweep worth of reflector applications on a panel.
        std::vector<double> panel(q.data().begin(), q.data().end());
        std::vector<double> v(n, 0.0);
        svdls::Rng rng(4);
        for (double &x : v) {
            x = rng.normal();
        }
        auto s = panel;
        auto p = panel;
        const std::size_t steps = std::min<std::size_t>(l, 32);
        const double ts = best_of(1, [&] {
            for (std::size_t j = 0; j < steps; ++j) {
                svdls::kernels::serial::apply_reflector(s, n, j + 1, l, j,
                                                        std::span<const double>(v.data() + j, n - j), 1e-3);
            }
        });
        const double tp = best_of(1, [&] {
            for (std::size_t j = 0; j < steps; ++j) {
                svdls::kernels::apply_reflector(p, n, j + 1, l, j, std::span<const double>(v.data() + j, n - j),
                                                1e-3);
            }
        });
        ok &= report("householder reflectors", 4.0 * static_cast<double>(n) * l * steps, ts, tp, s == p);
    }
    {
        const double tq = best_of(reps, [&] { (void)svdls::qr_orthonormalize(q); });
        std::printf("%-28s %8.4f s\n", "qr_orthonormalize N x l", tq);
        const double tr = best_of(reps, [&] { (void)svdls::randomized_svd(a, l - 10, {10, 4, 7}); });
        std::printf("%-28s %8.4f s\n", "randomized_svd k=l-10 q=4", tr);
    }
    return ok ? 0 : 1;
}
