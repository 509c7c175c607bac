#include "svdls/error.hpp"
#include "svdls/eval.hpp"
#include "svdls/rng.hpp"

#include <algorithm>

namespace svdls {

std::vector<std::size_t> CvPlan::training_indices(std::size_t held_out) const {
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        if (f != held_out) {
            out.insert(out.end(), folds[f].begin(), folds[f].end());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

CvPlan make_cv_plan(std::span<const std::size_t> labels, std::size_t k, std::uint64_t seed, bool stratified) {
    if (k < 2) {
        throw ArgumentError("cross-validation needs at least 2 folds, got " + std::to_string(k));
    }
    if (k > labels.size()) {
        throw ArgumentError("cannot split " + std::to_string(labels.size()) + " samples into " + std::to_string(k) +
                            " folds");
    }
    const std::size_t m = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
    std::vector<std::vector<std::size_t>> by_class(m);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        by_class[labels[i]].push_back(i);
    }
    for (std::size_t c = 0; c < m; ++c) {
        if (by_class[c].empty()) {
            throw ArgumentError("class " + std::to_string(c) + " has no samples");
        }
    }

    CvPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.stratified = stratified;
    plan.folds.resize(k);
    Rng rng(seed);
    // The deal position carries over between classes so fold sizes also
    // stay within one of each other.
    std::size_t next = 0;
    auto deal = [&](std::vector<std::size_t> &pool) {
        rng.shuffle(pool);
        for (std::size_t idx : pool) {
            plan.folds[next].push_back(idx);
            next = (next + 1) % k;
        }
    };
    if (stratified) {
        for (auto &pool : by_class) {
            deal(pool);
        }
    } else {
        std::vector<std::size_t> all(labels.size());
        for (std::size_t i = 0; i < all.size(); ++i) {
            all[i] = i;
        }
        deal(all);
    }
    for (auto &f : plan.folds) {
        std::sort(f.begin(), f.end());
    }
    return plan;
}

} // namespace svdls
