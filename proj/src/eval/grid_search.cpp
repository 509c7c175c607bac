#include "svdls/error.hpp"
#include "svdls/eval.hpp"

#include <algorithm>
#include <sstream>

#include <omp.h>

namespace svdls {

const GridCell &GridSearchResult::best() const {
    for (const GridCell &c : table) {
        if (c.lambda == best_lambda && c.k == best_k) {
            return c;
        }
    }
    throw ArgumentError("grid search result has no cell for the selected pair");
}

namespace {

struct FoldFailure {
    std::string message;
    bool singular = false;
};

std::string cell_label(double lambda, std::size_t k, std::size_t fold) {
    std::ostringstream s;
    s << "(lambda=" << lambda << ", k=" << k << ", fold=" << fold << ")";
    return s.str();
}

} // namespace

GridSearchResult grid_search(const LabeledDataset &data, std::span<const double> lambdas,
                             std::span<const std::size_t> ks, const CvPlan &plan, const GridSearchOptions &options) {
    data.validate();
    if (lambdas.empty() || ks.empty()) {
        throw ArgumentError("grid search needs non-empty lambda and k grids");
    }
    if (plan.folds.size() < 2) {
        throw ArgumentError("grid search needs a plan with at least 2 folds");
    }
    for (double l : lambdas) {
        if (!(l >= 0.0)) {
            throw ArgumentError("grid lambdas must be nonnegative");
        }
    }
    std::size_t max_k_allowed = data.num_features();
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        for (std::size_t idx : plan.folds[f]) {
            if (idx >= data.num_samples()) {
                throw ArgumentError("cv plan index " + std::to_string(idx) + " exceeds dataset size");
            }
        }
        max_k_allowed = std::min(max_k_allowed, data.num_samples() - plan.folds[f].size());
    }
    for (std::size_t k : ks) {
        if (k < 1 || k > max_k_allowed) {
            throw ArgumentError("grid k=" + std::to_string(k) + " must lie in [1, " + std::to_string(max_k_allowed) +
                                "] (smallest training split / feature count)");
        }
    }

    const std::size_t nf = plan.folds.size();
    const std::size_t m = data.num_classes();
    // f1[fold][lambda][k]
    std::vector<std::vector<std::vector<double>>> f1(
        nf, std::vector<std::vector<double>>(lambdas.size(), std::vector<double>(ks.size(), 0.0)));
    std::vector<FoldFailure> failures(nf);
    const std::size_t max_k = *std::max_element(ks.begin(), ks.end());

    const auto folds = static_cast<std::ptrdiff_t>(nf);
    const int threads = options.workers > 0 ? options.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::ptrdiff_t fi = 0; fi < folds; ++fi) {
        const auto fold = static_cast<std::size_t>(fi);
        double cur_lambda = 0.0;
        std::size_t cur_k = 0;
        try {
            const LabeledDataset train = data.subset(plan.training_indices(fold));
            const LabeledDataset held = data.subset(plan.folds[fold]);
            Matrix x = train.features;
            Matrix y = one_hot(train.labels, m);
            std::optional<Centering> centering;
            if (options.centered) {
                Centering c{column_means(x), column_means(y)};
                x = subtract_row_vector(x, c.feature_mean);
                y = subtract_row_vector(y, c.label_mean);
                centering = std::move(c);
            }
            // A single exact factorization serves every k by truncation.
            std::optional<TruncatedSvd> full;
            if (options.svd.method == SvdMethod::exact) {
                full = truncated_svd(x, max_k, options.svd);
            }
            for (std::size_t ki = 0; ki < ks.size(); ++ki) {
                cur_k = ks[ki];
                const TruncatedSvd f = full ? full->truncated(cur_k) : truncated_svd(x, cur_k, options.svd);
                for (std::size_t li = 0; li < lambdas.size(); ++li) {
                    cur_lambda = lambdas[li];
                    if (cur_lambda == 0.0 && f.s.back() <= 1e-12) {
                        throw SingularityError("lambda=0 with retained sigma_k <= 1e-12");
                    }
                    SvdLsModel model;
                    model.weights = svdls_weights(f, y, cur_lambda);
                    model.lambda = cur_lambda;
                    model.k = cur_k;
                    model.classes = data.classes;
                    model.centering = centering;
                    const auto pred = predict(model, held.features);
                    f1[fold][li][ki] = compute_metrics(held.labels, pred, m).macro_f1;
                }
            }
        } catch (const SingularityError &e) {
            failures[fold] = {"grid search " + cell_label(cur_lambda, cur_k, fold) + ": " + e.what(), true};
        } catch (const std::exception &e) {
            failures[fold] = {"grid search " + cell_label(cur_lambda, cur_k, fold) + ": " + e.what(), false};
        }
    }
    for (const FoldFailure &f : failures) {
        if (!f.message.empty()) {
            if (f.singular) {
                throw SingularityError(f.message);
            }
            throw Error(f.message);
        }
    }

    GridSearchResult result;
    const GridCell *best = nullptr;
    result.table.reserve(lambdas.size() * ks.size());
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
        for (std::size_t ki = 0; ki < ks.size(); ++ki) {
            GridCell cell;
            cell.lambda = lambdas[li];
            cell.k = ks[ki];
            double sum = 0.0;
            for (std::size_t fold = 0; fold < nf; ++fold) {
                cell.fold_f1.push_back(f1[fold][li][ki]);
                sum += f1[fold][li][ki];
            }
            cell.mean_f1 = sum / static_cast<double>(nf);
            result.table.push_back(std::move(cell));
        }
    }
    for (const GridCell &c : result.table) {
        if (best == nullptr || c.mean_f1 > best->mean_f1 ||
            (c.mean_f1 == best->mean_f1 && (c.k < best->k || (c.k == best->k && c.lambda < best->lambda)))) {
            best = &c;
        }
    }
    result.best_lambda = best->lambda;
    result.best_k = best->k;
    return result;
}

} // namespace svdls
