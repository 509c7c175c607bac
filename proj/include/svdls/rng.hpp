#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace svdls {

/// Seeded generator with platform-independent output.
///
/// The engine is std::mt19937_64, whose output sequence is fully fixed by
/// the C++ standard. The distributions on top are implemented here (the
/// standard library's distributions are implementation-defined), so a
/// given seed yields the same numbers with every compiler.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal via Box-Muller; values are produced in pairs.
    double normal();
    /// Uniform integer in [0, n), unbiased (rejection sampling).
    std::uint64_t below(std::uint64_t n);

    template <class T>
    void shuffle(std::span<T> v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }
    template <class T>
    void shuffle(std::vector<T> &v) { shuffle(std::span<T>(v)); }

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

} // namespace svdls
