#include "svdls/classifier.hpp"
#include "svdls/error.hpp"
#include "svdls/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace svdls {

namespace {

// Mean cross-entropy over `rows` of `features`; adds the gradient into `grad`
// when non-null. Weights are (d+1) x m with the bias in the last row.
double batch_loss(const Matrix &weights, const Matrix &features, std::span<const std::size_t> labels,
                  std::span<const std::size_t> rows, Matrix *grad, std::vector<double> &logits) {
    const std::size_t d = features.cols();
    const std::size_t m = weights.cols();
    const double inv_b = 1.0 / static_cast<double>(rows.size());
    const double *w = weights.data().data();
    logits.resize(m);
    double loss = 0.0;
    for (std::size_t r : rows) {
        const double *x = features.row(r).data();
        std::copy_n(w + d * m, m, logits.begin());
        for (std::size_t j = 0; j < d; ++j) {
            const double xj = x[j];
            const double *wj = w + j * m;
            for (std::size_t c = 0; c < m; ++c) {
                logits[c] += xj * wj[c];
            }
        }
        const double peak = *std::max_element(logits.begin(), logits.end());
        double total = 0.0;
        for (double &z : logits) {
            z = std::exp(z - peak);
            total += z;
        }
        loss += std::log(total) - std::log(logits[labels[r]]);
        if (grad != nullptr) {
            // dL/dz = softmax - onehot, scaled by 1/B
            for (double &z : logits) {
                z = z / total * inv_b;
            }
            logits[labels[r]] -= inv_b;
            double *g = grad->data().data();
            for (std::size_t j = 0; j < d; ++j) {
                const double xj = x[j];
                double *gj = g + j * m;
                for (std::size_t c = 0; c < m; ++c) {
                    gj[c] += xj * logits[c];
                }
            }
            double *gb = g + d * m;
            for (std::size_t c = 0; c < m; ++c) {
                gb[c] += logits[c];
            }
        }
    }
    return loss * inv_b;
}

} // namespace

void AdamBaselineConfig::validate() const {
    if (epochs < 1 || batch_size < 1) {
        throw ArgumentError("Adam baseline needs epochs >= 1 and batch_size >= 1");
    }
    if (!(learning_rate >= 0.0) || !(weight_decay >= 0.0) || !(epsilon > 0.0)) {
        throw ArgumentError("Adam baseline needs learning_rate >= 0, weight_decay >= 0, epsilon > 0");
    }
    if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0)) {
        throw ArgumentError("Adam betas must lie strictly between 0 and 1");
    }
}

Matrix adam_initial_weights(std::size_t d, std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(d, 1)));
    Matrix w(d + 1, m);
    for (double &x : w.data()) {
        x = rng.uniform(-bound, bound);
    }
    return w;
}

double softmax_cross_entropy(const Matrix &weights, const Matrix &features, std::span<const std::size_t> labels,
                             Matrix *gradient) {
    if (weights.rows() != features.cols() + 1 || labels.size() != features.rows() || features.rows() == 0) {
        throw DimensionError("softmax_cross_entropy: weights " + weights.shape_string() + ", features " +
                             features.shape_string() + ", " + std::to_string(labels.size()) + " labels");
    }
    for (std::size_t l : labels) {
        if (l >= weights.cols()) {
            throw ArgumentError("softmax_cross_entropy: label out of range");
        }
    }
    std::vector<std::size_t> rows(features.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    std::vector<double> scratch;
    if (gradient != nullptr) {
        *gradient = Matrix(weights.rows(), weights.cols());
    }
    return batch_loss(weights, features, labels, rows, gradient, scratch);
}

AdamFitResult fit_adam_baseline(const LabeledDataset &data, const AdamBaselineConfig &config) {
    data.validate();
    config.validate();
    const std::size_t n = data.num_samples();
    const std::size_t d = data.num_features();
    const std::size_t m = data.num_classes();

    Matrix w = adam_initial_weights(d, m, config.seed);
    Matrix grad(d + 1, m);
    std::vector<double> first(w.size(), 0.0);
    std::vector<double> second(w.size(), 0.0);
    std::vector<double> scratch;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffler(config.seed ^ 0x9e3779b97f4a7c15ULL);

    AdamFitResult result;
    result.epoch_loss.reserve(config.epochs);
    double beta1_pow = 1.0;
    double beta2_pow = 1.0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffler.shuffle(order);
        double epoch_total = 0.0;
        for (std::size_t start = 0; start < n; start += config.batch_size) {
            const std::size_t stop = std::min(start + config.batch_size, n);
            const std::span<const std::size_t> batch(order.data() + start, stop - start);
            std::fill(grad.data().begin(), grad.data().end(), 0.0);
            const double loss = batch_loss(w, data.features, data.labels, batch, &grad, scratch);
            epoch_total += loss * static_cast<double>(batch.size());

            beta1_pow *= config.beta1;
            beta2_pow *= config.beta2;
            const double c1 = 1.0 / (1.0 - beta1_pow);
            const double c2 = 1.0 / (1.0 - beta2_pow);
            const double decay = 1.0 - config.learning_rate * config.weight_decay;
            auto wd = w.data();
            const auto gd = grad.data();
            for (std::size_t i = 0; i < wd.size(); ++i) {
                first[i] = config.beta1 * first[i] + (1.0 - config.beta1) * gd[i];
                second[i] = config.beta2 * second[i] + (1.0 - config.beta2) * gd[i] * gd[i];
                wd[i] = wd[i] * decay -
                        config.learning_rate * (first[i] * c1) / (std::sqrt(second[i] * c2) + config.epsilon);
            }
        }
        const double mean_loss = epoch_total / static_cast<double>(n);
        if (!std::isfinite(mean_loss)) {
            std::ostringstream msg;
            msg << "Adam baseline diverged at epoch " << epoch + 1 << " (learning rate " << config.learning_rate
                << ", loss " << mean_loss << ")";
            throw NumericError(msg.str());
        }
        result.epoch_loss.push_back(mean_loss);
    }

    result.model.kind = ModelKind::adam;
    result.model.weights = std::move(w);
    result.model.has_bias_row = true;
    result.model.lambda = 0.0;
    result.model.k = d;
    result.model.classes = data.classes;
    return result;
}

} // namespace svdls
