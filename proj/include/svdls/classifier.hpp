#pragma once

#include "svdls/linalg.hpp"
#include "svdls/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace svdls {

/// Features paired with class indices into `classes`.
struct LabeledDataset {
    Matrix features;                 ///< N x d
    std::vector<std::size_t> labels; ///< N entries in [0, classes.size())
    std::vector<std::string> classes;

    [[nodiscard]] std::size_t num_samples() const noexcept { return features.rows(); }
    [[nodiscard]] std::size_t num_features() const noexcept { return features.cols(); }
    [[nodiscard]] std::size_t num_classes() const noexcept { return classes.size(); }

    /// Throws if sizes disagree, a label is out of range, N < 1, m < 2 or a
    /// feature is non-finite.
    void validate() const;
    /// Rows picked by index; classes unchanged.
    [[nodiscard]] LabeledDataset subset(std::span<const std::size_t> indices) const;
};

/// Means removed before fitting and restored at prediction time.
struct Centering {
    std::vector<double> feature_mean; ///< length d
    std::vector<double> label_mean;   ///< length m
};

enum class ModelKind { svdls, ridge_direct, mmse, adam };

[[nodiscard]] std::string to_string(ModelKind k);
[[nodiscard]] ModelKind parse_model_kind(const std::string &s);

/// A trained linear classifier.
///
/// Scores are `x W` (plus `b` when the last weight row is a bias, or with
/// centering `(x - mean_x) W + mean_y`); the label is the row argmax.
struct SvdLsModel {
    ModelKind kind = ModelKind::svdls;
    Matrix weights; ///< d x m, or (d+1) x m when has_bias_row
    double lambda = 0.0;
    std::size_t k = 0;
    std::vector<std::string> classes;
    std::optional<Centering> centering;
    bool has_bias_row = false;
    /// Retained singular values (SVD-LS fits only).
    std::vector<double> singular_values;
    SvdMode svd{};

    [[nodiscard]] std::size_t input_dim() const noexcept {
        return has_bias_row ? weights.rows() - 1 : weights.rows();
    }
    [[nodiscard]] std::size_t num_classes() const noexcept { return weights.cols(); }
    /// Throws ArgumentError if any field is inconsistent with the others.
    void validate() const;
};

/// N x m indicator matrix.
[[nodiscard]] Matrix one_hot(std::span<const std::size_t> labels, std::size_t m);

struct SvdLsOptions {
    double lambda = 1.0;
    std::size_t k = 0;
    SvdMode svd{};
    bool centered = false;
};

/// Ridge weights from a truncated factorization of the design matrix:
/// W = V diag(s_i / (s_i^2 + lambda)) U^T Y.
[[nodiscard]] Matrix svdls_weights(const TruncatedSvd &f, const Matrix &targets, double lambda);

/// SVD-LS fit: truncated SVD of X, diagonal ridge solve in the reduced
/// basis, back-projection to the input space.
[[nodiscard]] SvdLsModel fit_svdls(const LabeledDataset &data, const SvdLsOptions &options);

/// Reference ridge fit through the d x d normal equations (Cholesky).
[[nodiscard]] SvdLsModel fit_ridge_direct(const LabeledDataset &data, double lambda, bool centered = false);

/// Linear MMSE fit from the sample covariances of centered data.
[[nodiscard]] SvdLsModel fit_mmse_centered(const LabeledDataset &data);

[[nodiscard]] Matrix decision_scores(const SvdLsModel &model, const Matrix &features);
/// Row-wise argmax with ties going to the lowest index.
[[nodiscard]] std::vector<std::size_t> argmax_rows(const Matrix &scores);
[[nodiscard]] std::vector<std::size_t> predict(const SvdLsModel &model, const Matrix &features);

// --- iterative baseline ----------------------------------------------------

struct AdamBaselineConfig {
    std::size_t epochs = 30;
    std::size_t batch_size = 16;
    double learning_rate = 1e-3;
    double weight_decay = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t seed = 0;

    void validate() const;
};

struct AdamFitResult {
    SvdLsModel model;
    std::vector<double> epoch_loss; ///< mean minibatch cross-entropy per epoch
};

/// Linear softmax classifier trained by minibatch AdamW on fixed features.
[[nodiscard]] AdamFitResult fit_adam_baseline(const LabeledDataset &data, const AdamBaselineConfig &config);

/// Starting weights of fit_adam_baseline: (d+1) x m, uniform in +-1/sqrt(d).
[[nodiscard]] Matrix adam_initial_weights(std::size_t d, std::size_t m, std::uint64_t seed);

/// Mean softmax cross-entropy of a (d+1) x m weight matrix whose last row is
/// the bias. When `gradient` is non-null it receives d(loss)/d(weights).
double softmax_cross_entropy(const Matrix &weights, const Matrix &features, std::span<const std::size_t> labels,
                             Matrix *gradient = nullptr);

} // namespace svdls
