#pragma once

#include <cstddef>
#include <cstdint>

namespace svdls {

struct FlopConfig {
    std::uint64_t n = 0; ///< samples
    std::uint64_t d = 0; ///< feature width
    std::uint64_t k = 0; ///< retained components
    std::uint64_t m = 0; ///< classes
    std::uint64_t q = 0; ///< power iterations
    std::uint64_t epochs = 0;
    std::uint64_t batch_size = 0;
};

/// Analytic matrix-multiplication FLOP counts for one SVD-LS fit and for
/// minibatch training of a linear layer.
struct FlopModel {
    std::uint64_t randomized_svd = 0;  ///< (2q+2) N d k + 2 N k^2 + k^2 d
    std::uint64_t projection = 0;      ///< 2 N d k
    std::uint64_t gram = 0;            ///< 2 N k^2
    std::uint64_t cross = 0;           ///< 2 N k m
    std::uint64_t solve = 0;           ///< k^3 + 2 k^2 m
    std::uint64_t back_projection = 0; ///< 2 d k m
    std::uint64_t svdls_total = 0;     ///< sum of the stages above
    /// q N d k + N k^2 + k^2 d + N k m + k^2 m + k^3 + d k m
    std::uint64_t svdls_order = 0;

    std::uint64_t iterative_steps = 0;    ///< T = E * ceil(N / B)
    std::uint64_t iterative_per_step = 0; ///< 2 B d m
    std::uint64_t iterative_total = 0;    ///< T * 2 B d m
    std::uint64_t iterative_order = 0;    ///< T B d m

    /// iterative_total / svdls_total
    [[nodiscard]] double predicted_speedup() const noexcept {
        return svdls_total == 0 ? 0.0 : static_cast<double>(iterative_total) / static_cast<double>(svdls_total);
    }
};

[[nodiscard]] FlopModel flop_model(const FlopConfig &c);

} // namespace svdls
