#include "svdls/classifier.hpp"
#include "svdls/error.hpp"

#include <algorithm>
#include <sstream>

namespace svdls {

namespace {

constexpr double kMinRetainedSigma = 1e-12;

} // namespace

Matrix svdls_weights(const TruncatedSvd &f, const Matrix &targets, double lambda) {
    if (f.u.rows() != targets.rows()) {
        throw DimensionError("svdls_weights: factor U is " + f.u.shape_string() + " but targets are " +
                             targets.shape_string());
    }
    // The reduced Gram matrix is diag(s^2), so the solve is a row scaling.
    Matrix reduced = matmul_tn(f.u, targets);
    for (std::size_t i = 0; i < reduced.rows(); ++i) {
        const double scale = f.s[i] / (f.s[i] * f.s[i] + lambda);
        for (double &x : reduced.row(i)) {
            x *= scale;
        }
    }
    return matmul(f.v, reduced);
}

SvdLsModel fit_svdls(const LabeledDataset &data, const SvdLsOptions &options) {
    data.validate();
    const std::size_t n = data.num_samples();
    const std::size_t d = data.num_features();
    if (options.k < 1 || options.k > std::min(n, d)) {
        throw ArgumentError("k=" + std::to_string(options.k) + " must lie in [1, min(N, d)] = [1, " +
                            std::to_string(std::min(n, d)) + "]");
    }
    if (!(options.lambda >= 0.0)) {
        throw ArgumentError("lambda must be nonnegative, got " + std::to_string(options.lambda));
    }

    Matrix x = data.features;
    Matrix y = one_hot(data.labels, data.num_classes());
    std::optional<Centering> centering;
    if (options.centered) {
        Centering c{column_means(x), column_means(y)};
        x = subtract_row_vector(x, c.feature_mean);
        y = subtract_row_vector(y, c.label_mean);
        centering = std::move(c);
    }

    const TruncatedSvd f = truncated_svd(x, options.k, options.svd);
    if (options.lambda == 0.0 && f.s.back() <= kMinRetainedSigma) {
        std::ostringstream msg;
        msg << "lambda=0 with retained singular value sigma_k=" << f.s.back()
            << " <= 1e-12; use lambda > 0 or a smaller k";
        throw SingularityError(msg.str());
    }

    SvdLsModel model;
    model.kind = ModelKind::svdls;
    model.weights = svdls_weights(f, y, options.lambda);
    model.lambda = options.lambda;
    model.k = options.k;
    model.classes = data.classes;
    model.centering = std::move(centering);
    model.singular_values = f.s;
    model.svd = options.svd;
    return model;
}

} // namespace svdls
