#include "svdls/error.hpp"
#include "svdls/eval.hpp"

namespace svdls {

PairedTestResult bowker_test(std::span<const std::size_t> pred_a, std::span<const std::size_t> pred_b,
                             std::size_t m, BowkerDof dof_rule) {
    if (pred_a.size() != pred_b.size()) {
        throw DimensionError("bowker_test: prediction vectors have lengths " + std::to_string(pred_a.size()) +
                             " and " + std::to_string(pred_b.size()));
    }
    if (pred_a.empty()) {
        throw ArgumentError("bowker_test needs at least one paired prediction");
    }
    PairedTestResult result;
    result.table = CountMatrix(m);
    for (std::size_t i = 0; i < pred_a.size(); ++i) {
        if (pred_a[i] >= m || pred_b[i] >= m) {
            throw ArgumentError("bowker_test: class index out of range at sample " + std::to_string(i));
        }
        ++result.table(pred_a[i], pred_b[i]);
    }

    std::size_t observed = 0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const auto nij = static_cast<double>(result.table(i, j));
            const auto nji = static_cast<double>(result.table(j, i));
            if (nij + nji > 0.0) {
                result.statistic += (nij - nji) * (nij - nji) / (nij + nji);
                ++observed;
            }
        }
    }
    result.dof = dof_rule == BowkerDof::observed_pairs ? observed : m * (m - 1) / 2;
    result.p_value = result.dof == 0 ? 1.0 : chi2_sf(result.statistic, result.dof);
    return result;
}

} // namespace svdls
