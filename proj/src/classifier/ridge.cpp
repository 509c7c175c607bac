#include "svdls/classifier.hpp"
#include "svdls/error.hpp"

namespace svdls {

SvdLsModel fit_ridge_direct(const LabeledDataset &data, double lambda, bool centered) {
    data.validate();
    if (!(lambda >= 0.0)) {
        throw ArgumentError("lambda must be nonnegative, got " + std::to_string(lambda));
    }
    Matrix x = data.features;
    Matrix y = one_hot(data.labels, data.num_classes());
    std::optional<Centering> centering;
    if (centered) {
        Centering c{column_means(x), column_means(y)};
        x = subtract_row_vector(x, c.feature_mean);
        y = subtract_row_vector(y, c.label_mean);
        centering = std::move(c);
    }

    Matrix normal = kernels::gram(x);
    for (std::size_t i = 0; i < normal.rows(); ++i) {
        normal(i, i) += lambda;
    }
    SvdLsModel model;
    model.kind = ModelKind::ridge_direct;
    try {
        model.weights = cholesky_solve(normal, matmul_tn(x, y));
    } catch (const SingularityError &e) {
        throw SingularityError(std::string("ridge normal equations are singular: ") + e.what());
    }
    model.lambda = lambda;
    model.k = data.num_features();
    model.classes = data.classes;
    model.centering = std::move(centering);
    model.svd = SvdMode::exact();
    return model;
}

SvdLsModel fit_mmse_centered(const LabeledDataset &data) {
    data.validate();
    const Centering c{column_means(data.features), column_means(one_hot(data.labels, data.num_classes()))};
    const Matrix x = subtract_row_vector(data.features, c.feature_mean);
    const Matrix y = subtract_row_vector(one_hot(data.labels, data.num_classes()), c.label_mean);
    const double inv_n = 1.0 / static_cast<double>(data.num_samples());

    // W = C_XX^{-1} C_XY, the transpose of C_YX C_XX^{-1}.
    const Matrix cxx = inv_n * kernels::gram(x);
    const Matrix cxy = inv_n * matmul_tn(x, y);
    SvdLsModel model;
    model.kind = ModelKind::mmse;
    try {
        model.weights = lu_solve(cxx, cxy);
    } catch (const SingularityError &e) {
        throw SingularityError(std::string("feature covariance is singular (") + e.what() +
                               "); use SVD-LS with k below the feature rank");
    }
    model.lambda = 0.0;
    model.k = data.num_features();
    model.classes = data.classes;
    model.centering = c;
    model.svd = SvdMode::exact();
    return model;
}

} // namespace svdls
