#include "svdls/flops.hpp"

namespace svdls {

FlopModel flop_model(const FlopConfig &c) {
    const std::uint64_t n = c.n;
    const std::uint64_t d = c.d;
    const std::uint64_t k = c.k;
    const std::uint64_t m = c.m;
    const std::uint64_t q = c.q;

    FlopModel f;
    f.randomized_svd = (2 * q + 2) * n * d * k + 2 * n * k * k + k * k * d;
    f.projection = 2 * n * d * k;
    f.gram = 2 * n * k * k;
    f.cross = 2 * n * k * m;
    f.solve = k * k * k + 2 * k * k * m;
    f.back_projection = 2 * d * k * m;
    f.svdls_total = f.randomized_svd + f.projection + f.gram + f.cross + f.solve + f.back_projection;
    f.svdls_order = q * n * d * k + n * k * k + k * k * d + n * k * m + k * k * m + k * k * k + d * k * m;

    const std::uint64_t steps_per_epoch = c.batch_size == 0 ? 0 : (n + c.batch_size - 1) / c.batch_size;
    f.iterative_steps = c.epochs * steps_per_epoch;
    f.iterative_per_step = 2 * c.batch_size * d * m;
    f.iterative_total = f.iterative_steps * f.iterative_per_step;
    f.iterative_order = f.iterative_steps * c.batch_size * d * m;
    return f;
}

} // namespace svdls
