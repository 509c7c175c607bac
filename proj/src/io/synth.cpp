#include "svdls/io.hpp"
#include "svdls/rng.hpp"

#include <cstdio>
#include <numeric>

namespace svdls::io {

LabeledDataset synth_dataset(std::size_t n_per_class, std::size_t d, std::size_t m, double separation,
                             std::uint64_t seed) {
    if (m < 2 || d < m) {
        throw ArgumentError("synth_dataset needs m >= 2 and d >= m (got m=" + std::to_string(m) +
                            ", d=" + std::to_string(d) + ")");
    }
    if (n_per_class < 1) {
        throw ArgumentError("synth_dataset needs n_per_class >= 1");
    }
    Rng rng(seed);
    const std::size_t n = n_per_class * m;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);

    LabeledDataset data;
    data.features = Matrix(n, d);
    data.labels.resize(n);
    for (std::size_t c = 0; c < m; ++c) {
        data.classes.push_back("class" + std::to_string(c));
    }
    // Sample `order[i]` is the (order[i] % n_per_class)-th draw of class
    // order[i] / n_per_class; rows are filled in shuffled order.
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = order[i] / n_per_class;
        data.labels[i] = c;
        auto row = data.features.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            row[j] = rng.normal();
        }
        row[c] += separation;
    }
    return data;
}

std::vector<std::string> synth_ids(std::size_t n) {
    std::vector<std::string> ids(n);
    char buf[32];
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof(buf), "s%06zu", i);
        ids[i] = buf;
    }
    return ids;
}

} // namespace svdls::io
