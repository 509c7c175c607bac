#pragma once

#include "svdls/classifier.hpp"
#include "svdls/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace svdls {

/// Square table of counts, row-major.
struct CountMatrix {
    std::size_t n = 0;
    std::vector<std::size_t> counts;

    explicit CountMatrix(std::size_t size = 0) : n(size), counts(size * size, 0) {}
    std::size_t &operator()(std::size_t i, std::size_t j) { return counts[i * n + j]; }
    std::size_t operator()(std::size_t i, std::size_t j) const { return counts[i * n + j]; }
    [[nodiscard]] std::size_t total() const;
    friend bool operator==(const CountMatrix &, const CountMatrix &) = default;
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

struct MetricsReport {
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    std::vector<ClassMetrics> per_class;
    CountMatrix confusion; ///< rows = true class, cols = predicted
};

/// Macro-averaged metrics; empty denominators count as 0.
[[nodiscard]] MetricsReport compute_metrics(std::span<const std::size_t> truth, std::span<const std::size_t> predicted,
                                            std::size_t m);

/// Upper tail of the chi-squared distribution, Q(dof/2, x/2).
[[nodiscard]] double chi2_sf(double x, std::size_t dof);

/// Regularized upper incomplete gamma Q(a, x) for a > 0, x >= 0.
[[nodiscard]] double gamma_q(double a, double x);

enum class BowkerDof {
    /// Count only pairs (i, j) with n_ij + n_ji > 0.
    observed_pairs,
    /// Always m(m-1)/2.
    all_pairs,
};

struct PairedTestResult {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
    CountMatrix table; ///< rows = model A's class, cols = model B's class
};

/// McNemar-Bowker symmetry test on two prediction vectors over the same samples.
[[nodiscard]] PairedTestResult bowker_test(std::span<const std::size_t> pred_a, std::span<const std::size_t> pred_b,
                                           std::size_t m, BowkerDof dof_rule = BowkerDof::observed_pairs);

struct CvPlan {
    std::vector<std::vector<std::size_t>> folds;
    std::size_t k = 0;
    std::uint64_t seed = 0;
    bool stratified = true;

    /// Indices of every fold except `held_out`, ascending.
    [[nodiscard]] std::vector<std::size_t> training_indices(std::size_t held_out) const;
};

/// Seeded k-fold partition. In stratified mode each class is shuffled and
/// dealt round-robin so per-class fold counts differ by at most one.
[[nodiscard]] CvPlan make_cv_plan(std::span<const std::size_t> labels, std::size_t k, std::uint64_t seed,
                                  bool stratified = true);

struct GridCell {
    double lambda = 0.0;
    std::size_t k = 0;
    double mean_f1 = 0.0;
    std::vector<double> fold_f1;
};

struct GridSearchResult {
    double best_lambda = 0.0;
    std::size_t best_k = 0;
    std::vector<GridCell> table; ///< lambda-major grid order
    std::string selection_rule = "max_mean_macro_f1;ties:smaller_k,smaller_lambda";

    [[nodiscard]] const GridCell &best() const;
};

struct GridSearchOptions {
    SvdMode svd{};
    bool centered = false;
    /// OpenMP threads for evaluating (fold, k) cells; 0 = runtime default.
    int workers = 1;
};

/// Cross-validated (lambda, k) search maximizing mean validation macro-F1.
[[nodiscard]] GridSearchResult grid_search(const LabeledDataset &data, std::span<const double> lambdas,
                                           std::span<const std::size_t> ks, const CvPlan &plan,
                                           const GridSearchOptions &options = {});

} // namespace svdls
