#include "svdls/classifier.hpp"
#include "svdls/error.hpp"

#include <algorithm>

namespace svdls {

void LabeledDataset::validate() const {
    if (features.rows() < 1) {
        throw ArgumentError("dataset has no samples");
    }
    if (labels.size() != features.rows()) {
        throw DimensionError("dataset has " + std::to_string(features.rows()) + " feature rows but " +
                             std::to_string(labels.size()) + " labels");
    }
    if (classes.size() < 2) {
        throw ArgumentError("dataset needs at least 2 classes, got " + std::to_string(classes.size()));
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= classes.size()) {
            throw ArgumentError("label " + std::to_string(labels[i]) + " at row " + std::to_string(i) +
                                " is out of range for " + std::to_string(classes.size()) + " classes");
        }
    }
    if (!features.all_finite()) {
        throw NumericError("dataset features contain non-finite values");
    }
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
    LabeledDataset out;
    out.features = features.select_rows(indices);
    out.labels.reserve(indices.size());
    for (std::size_t i : indices) {
        out.labels.push_back(labels.at(i));
    }
    out.classes = classes;
    return out;
}

std::string to_string(ModelKind k) {
    switch (k) {
    case ModelKind::svdls:
        return "svdls";
    case ModelKind::ridge_direct:
        return "ridge_direct";
    case ModelKind::mmse:
        return "mmse";
    case ModelKind::adam:
        return "adam";
    }
    return "unknown";
}

ModelKind parse_model_kind(const std::string &s) {
    for (ModelKind k : {ModelKind::svdls, ModelKind::ridge_direct, ModelKind::mmse, ModelKind::adam}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw ArgumentError("unknown model kind '" + s + "'");
}

void SvdLsModel::validate() const {
    if (weights.cols() != classes.size()) {
        throw ArgumentError("model has " + std::to_string(weights.cols()) + " weight columns but " +
                            std::to_string(classes.size()) + " classes");
    }
    if (has_bias_row && weights.rows() < 1) {
        throw ArgumentError("model with a bias row has no weight rows");
    }
    if (k > input_dim()) {
        throw ArgumentError("model k=" + std::to_string(k) + " exceeds input dimension " +
                            std::to_string(input_dim()));
    }
    if (lambda < 0.0) {
        throw ArgumentError("model lambda must be nonnegative");
    }
    if (centering) {
        if (centering->feature_mean.size() != input_dim() || centering->label_mean.size() != num_classes()) {
            throw ArgumentError("model centering means do not match the weight shape " + weights.shape_string());
        }
    }
}

Matrix one_hot(std::span<const std::size_t> labels, std::size_t m) {
    Matrix y(labels.size(), m);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= m) {
            throw ArgumentError("one_hot: label " + std::to_string(labels[i]) + " at row " + std::to_string(i) +
                                " is not below m=" + std::to_string(m));
        }
        y(i, labels[i]) = 1.0;
    }
    return y;
}

Matrix decision_scores(const SvdLsModel &model, const Matrix &features) {
    if (features.cols() != model.input_dim()) {
        throw DimensionError("features have " + std::to_string(features.cols()) + " columns but the model expects " +
                             std::to_string(model.input_dim()));
    }
    const std::size_t d = model.input_dim();
    if (model.centering) {
        Matrix scores = matmul(subtract_row_vector(features, model.centering->feature_mean), model.weights);
        for (std::size_t i = 0; i < scores.rows(); ++i) {
            auto r = scores.row(i);
            for (std::size_t j = 0; j < r.size(); ++j) {
                r[j] += model.centering->label_mean[j];
            }
        }
        return scores;
    }
    if (model.has_bias_row) {
        Matrix w(d, model.num_classes());
        std::copy_n(model.weights.data().begin(), d * model.num_classes(), w.data().begin());
        Matrix scores = matmul(features, w);
        const auto bias = model.weights.row(d);
        for (std::size_t i = 0; i < scores.rows(); ++i) {
            auto r = scores.row(i);
            for (std::size_t j = 0; j < r.size(); ++j) {
                r[j] += bias[j];
            }
        }
        return scores;
    }
    return matmul(features, model.weights);
}

std::vector<std::size_t> argmax_rows(const Matrix &scores) {
    std::vector<std::size_t> out(scores.rows(), 0);
    for (std::size_t i = 0; i < scores.rows(); ++i) {
        const auto r = scores.row(i);
        std::size_t best = 0;
        for (std::size_t j = 1; j < r.size(); ++j) {
            if (r[j] > r[best]) {
                best = j;
            }
        }
        out[i] = best;
    }
    return out;
}

std::vector<std::size_t> predict(const SvdLsModel &model, const Matrix &features) {
    return argmax_rows(decision_scores(model, features));
}

} // namespace svdls
