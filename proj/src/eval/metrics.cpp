#include "svdls/error.hpp"
#include "svdls/eval.hpp"

#include <numeric>

namespace svdls {

std::size_t CountMatrix::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

MetricsReport compute_metrics(std::span<const std::size_t> truth, std::span<const std::size_t> predicted,
                              std::size_t m) {
    if (truth.size() != predicted.size()) {
        throw DimensionError("compute_metrics: " + std::to_string(truth.size()) + " true labels but " +
                             std::to_string(predicted.size()) + " predictions");
    }
    if (truth.empty()) {
        throw ArgumentError("compute_metrics needs at least one sample");
    }
    MetricsReport r;
    r.confusion = CountMatrix(m);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] >= m || predicted[i] >= m) {
            throw ArgumentError("compute_metrics: class index out of range at sample " + std::to_string(i));
        }
        ++r.confusion(truth[i], predicted[i]);
    }

    std::size_t correct = 0;
    r.per_class.resize(m);
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t row = 0;
        std::size_t col = 0;
        for (std::size_t j = 0; j < m; ++j) {
            row += r.confusion(c, j);
            col += r.confusion(j, c);
        }
        const std::size_t tp = r.confusion(c, c);
        correct += tp;
        ClassMetrics &cm = r.per_class[c];
        cm.support = row;
        cm.precision = col == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(col);
        cm.recall = row == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(row);
        const double denom = cm.precision + cm.recall;
        cm.f1 = denom == 0.0 ? 0.0 : 2.0 * cm.precision * cm.recall / denom;
        r.macro_precision += cm.precision;
        r.macro_recall += cm.recall;
        r.macro_f1 += cm.f1;
    }
    const auto md = static_cast<double>(m);
    r.macro_precision /= md;
    r.macro_recall /= md;
    r.macro_f1 /= md;
    r.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
    return r;
}

} // namespace svdls
