#include "svdls/commands.hpp"

#include "svdls/io.hpp"
#include "svdls/kernels.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace svdls::cli {

using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Both output modes render numbers through the JSON serializer so text and
// JSON lines carry the same digits.
std::string num(double x) { return json(x).dump(); }

// One record: a JSON line, or "record" followed by indented "key: value" lines.
void emit(std::ostream &out, OutputFormat fmt, const std::string &record, const json &fields) {
    if (fmt == OutputFormat::json_lines) {
        json line = {{"record", record}};
        line.update(fields);
        out << line.dump() << '\n';
        return;
    }
    out << record << '\n';
    for (const auto &[key, value] : fields.items()) {
        out << "  " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    }
}

std::string format_table(const CountMatrix &t, const std::vector<std::string> &classes, const std::string &corner) {
    std::size_t width = corner.size();
    for (const auto &c : classes) {
        width = std::max(width, c.size());
    }
    std::ostringstream s;
    s << "  " << std::setw(static_cast<int>(width)) << corner;
    for (const auto &c : classes) {
        s << ' ' << std::setw(static_cast<int>(std::max<std::size_t>(c.size(), 6))) << c;
    }
    s << '\n';
    for (std::size_t i = 0; i < t.n; ++i) {
        s << "  " << std::setw(static_cast<int>(width)) << classes[i];
        for (std::size_t j = 0; j < t.n; ++j) {
            s << ' ' << std::setw(static_cast<int>(std::max<std::size_t>(classes[j].size(), 6))) << t(i, j);
        }
        s << '\n';
    }
    return s.str();
}

json table_json(const CountMatrix &t) {
    json rows = json::array();
    for (std::size_t i = 0; i < t.n; ++i) {
        json r = json::array();
        for (std::size_t j = 0; j < t.n; ++j) {
            r.push_back(t(i, j));
        }
        rows.push_back(r);
    }
    return rows;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double accuracy(std::span<const std::size_t> a, std::span<const std::size_t> b) {
    std::size_t hit = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        hit += a[i] == b[i] ? 1 : 0;
    }
    return static_cast<double>(hit) / static_cast<double>(a.size());
}

// Map the labels of aligned prediction files onto one sorted vocabulary
// shared with the ground truth.
struct AlignedLabels {
    std::vector<std::string> classes;
    std::vector<std::size_t> truth;
    std::vector<std::vector<std::size_t>> predicted;
};

AlignedLabels align(const io::LabelFile &labels, const std::vector<io::PredictionFile> &preds,
                    const std::vector<std::filesystem::path> &paths) {
    std::set<std::string> vocab(labels.labels.begin(), labels.labels.end());
    for (const auto &p : preds) {
        vocab.insert(p.labels.begin(), p.labels.end());
    }
    AlignedLabels out;
    out.classes.assign(vocab.begin(), vocab.end());
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < out.classes.size(); ++i) {
        index[out.classes[i]] = i;
    }
    for (const auto &l : labels.labels) {
        out.truth.push_back(index.at(l));
    }
    for (std::size_t f = 0; f < preds.size(); ++f) {
        if (preds[f].ids.size() != labels.size()) {
            throw IoError(paths[f].string() + " has " + std::to_string(preds[f].ids.size()) + " rows but the labels have " +
                          std::to_string(labels.size()));
        }
        std::map<std::string, std::size_t> row_of;
        for (std::size_t r = 0; r < preds[f].ids.size(); ++r) {
            row_of[preds[f].ids[r]] = r;
        }
        std::vector<std::size_t> aligned;
        aligned.reserve(labels.size());
        for (const auto &id : labels.ids) {
            const auto it = row_of.find(id);
            if (it == row_of.end()) {
                throw IoError(paths[f].string() + ": no prediction for id '" + id + "'");
            }
            aligned.push_back(index.at(preds[f].labels[it->second]));
        }
        out.predicted.push_back(std::move(aligned));
    }
    return out;
}

void require_k(std::size_t k, std::size_t d, std::size_t n) {
    if (k < 1) {
        throw UsageError("--k must be at least 1");
    }
    if (k > d) {
        throw UsageError("--k " + std::to_string(k) + " exceeds the feature dimension d=" + std::to_string(d));
    }
    if (k > n) {
        throw UsageError("--k " + std::to_string(k) + " exceeds the sample count N=" + std::to_string(n));
    }
}

void require_lambda(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw UsageError("--lambda must be a finite nonnegative number");
    }
}

} // namespace

OutputFormat parse_format(const std::string &s) {
    if (s == "text") {
        return OutputFormat::text;
    }
    if (s == "json-lines") {
        return OutputFormat::json_lines;
    }
    throw UsageError("unknown --format '" + s + "' (expected text or json-lines)");
}

int exit_code_for(const std::exception &e) noexcept {
    return dynamic_cast<const UsageError *>(&e) != nullptr ? 2 : 1;
}

std::vector<double> parse_lambda_grid(const std::string &s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size() || !(v >= 0.0) || !std::isfinite(v)) {
                throw std::invalid_argument(tok);
            }
            out.push_back(v);
        } catch (const std::exception &) {
            throw UsageError("--lambda-grid entry '" + tok + "' is not a nonnegative number");
        }
    }
    if (out.empty()) {
        throw UsageError("--lambda-grid is empty");
    }
    return out;
}

std::vector<std::size_t> parse_k_grid(const std::string &s, std::size_t d) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "d") {
            out.push_back(d);
            continue;
        }
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
            throw UsageError("--k-grid entry '" + tok + "' is not a count or 'd'");
        }
        const auto v = static_cast<std::size_t>(std::stoull(tok));
        if (v == 0) {
            throw UsageError("--k-grid entries must be at least 1");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw UsageError("--k-grid is empty");
    }
    return out;
}

std::vector<double> default_lambda_grid() { return {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0}; }

std::vector<std::size_t> default_k_grid(std::size_t d, std::size_t limit) {
    std::vector<std::size_t> out;
    for (std::size_t k : {std::size_t{16}, std::size_t{32}, std::size_t{64}, std::size_t{128}, std::size_t{256}, d}) {
        if (k <= std::min(d, limit) && std::find(out.begin(), out.end(), k) == out.end()) {
            out.push_back(k);
        }
    }
    if (out.empty()) {
        out.push_back(std::min(d, limit));
    }
    return out;
}

TrainSummary cmd_train(const TrainOptions &opt, std::ostream &out) {
    require_lambda(opt.lambda);
    if (opt.out_dir.empty()) {
        throw UsageError("train needs --out");
    }
    const auto labels = io::read_labels(opt.labels);
    const LabeledDataset data = io::load_dataset(opt.features, labels);
    require_k(opt.k, data.num_features(), data.num_samples());

    const auto start = std::chrono::steady_clock::now();
    const SvdLsModel model = fit_svdls(data, {opt.lambda, opt.k, opt.svd, opt.centered});
    const double elapsed = seconds_since(start);
    io::save_model(model, opt.out_dir);

    TrainSummary s;
    s.n = data.num_samples();
    s.d = data.num_features();
    s.m = data.num_classes();
    s.k = model.k;
    s.lambda = model.lambda;
    s.sigma_first = model.singular_values.front();
    s.sigma_last = model.singular_values.back();
    s.condition = s.sigma_last > 0.0 ? s.sigma_first / s.sigma_last : std::numeric_limits<double>::infinity();
    s.train_accuracy = accuracy(predict(model, data.features), data.labels);
    s.fit_seconds = elapsed;

    json fields = {{"n", s.n},
                   {"d", s.d},
                   {"m", s.m},
                   {"k", s.k},
                   {"lambda", s.lambda},
                   {"svd", to_string(opt.svd.method)},
                   {"centered", opt.centered},
                   {"sigma_1", s.sigma_first},
                   {"sigma_k", s.sigma_last},
                   {"condition_ratio", std::isfinite(s.condition) ? json(s.condition) : json("inf")},
                   {"train_accuracy", s.train_accuracy},
                   {"fit_seconds", s.fit_seconds},
                   {"model_dir", opt.out_dir.string()}};
    emit(out, opt.format, "train_summary", fields);
    return s;
}

std::size_t cmd_predict(const PredictOptions &opt, std::ostream &out) {
    if (opt.out.empty()) {
        throw UsageError("predict needs --out");
    }
    const SvdLsModel model = io::load_model(opt.model_dir);
    const Matrix features = io::read_features(opt.features);
    if (features.cols() != model.input_dim()) {
        throw DimensionError(opt.features.string() + " has " + std::to_string(features.cols()) +
                             " columns but the model expects " + std::to_string(model.input_dim()));
    }
    std::vector<std::string> ids;
    if (opt.ids_from) {
        ids = io::read_labels(*opt.ids_from).ids;
        if (ids.size() != features.rows()) {
            throw DimensionError(opt.ids_from->string() + " has " + std::to_string(ids.size()) + " ids but " +
                                 opt.features.string() + " has " + std::to_string(features.rows()) + " rows");
        }
    } else {
        for (std::size_t i = 0; i < features.rows(); ++i) {
            ids.push_back(std::to_string(i));
        }
    }
    const Matrix scores = decision_scores(model, features);
    const auto predicted = argmax_rows(scores);
    io::write_predictions(opt.out, ids, predicted, model.classes, opt.with_scores ? &scores : nullptr);
    emit(out, opt.format, "predict_summary",
         {{"n", predicted.size()}, {"model_dir", opt.model_dir.string()}, {"out", opt.out.string()}});
    return predicted.size();
}

MetricsReport cmd_evaluate(const EvaluateOptions &opt, std::ostream &out) {
    const auto labels = io::read_labels(opt.labels);
    const auto preds = io::read_predictions(opt.predictions);
    const AlignedLabels a = align(labels, {preds}, {opt.predictions});
    const MetricsReport r = compute_metrics(a.truth, a.predicted[0], a.classes.size());

    emit(out, opt.format, "metrics",
         {{"n", a.truth.size()},
          {"accuracy", r.accuracy},
          {"macro_f1", r.macro_f1},
          {"macro_precision", r.macro_precision},
          {"macro_recall", r.macro_recall}});
    for (std::size_t c = 0; c < a.classes.size(); ++c) {
        const ClassMetrics &cm = r.per_class[c];
        emit(out, opt.format, "class_metrics",
             {{"class", a.classes[c]},
              {"precision", cm.precision},
              {"recall", cm.recall},
              {"f1", cm.f1},
              {"support", cm.support}});
    }
    if (opt.format == OutputFormat::json_lines) {
        emit(out, opt.format, "confusion", {{"classes", a.classes}, {"rows_true_cols_predicted", table_json(r.confusion)}});
    } else {
        out << "confusion (rows = true, cols = predicted)\n" << format_table(r.confusion, a.classes, "true\\pred");
    }
    return r;
}

GridSearchResult cmd_cv(const CvOptions &opt, std::ostream &out) {
    const auto labels = io::read_labels(opt.labels);
    const LabeledDataset data = io::load_dataset(opt.features, labels);
    if (opt.folds < 2 || opt.folds > data.num_samples()) {
        throw UsageError("--folds must lie in [2, N]");
    }
    const CvPlan plan = make_cv_plan(data.labels, opt.folds, opt.seed, opt.stratified);
    std::size_t smallest_train = data.num_samples();
    for (const auto &f : plan.folds) {
        smallest_train = std::min(smallest_train, data.num_samples() - f.size());
    }
    const auto lambdas = opt.lambda_grid ? parse_lambda_grid(*opt.lambda_grid) : default_lambda_grid();
    const auto ks = opt.k_grid ? parse_k_grid(*opt.k_grid, data.num_features())
                               : default_k_grid(data.num_features(), smallest_train);
    for (std::size_t k : ks) {
        if (k > data.num_features() || k > smallest_train) {
            throw UsageError("--k-grid entry " + std::to_string(k) + " exceeds min(d=" +
                             std::to_string(data.num_features()) + ", smallest training split=" +
                             std::to_string(smallest_train) + ")");
        }
    }

    const auto start = std::chrono::steady_clock::now();
    const GridSearchResult result =
        grid_search(data, lambdas, ks, plan, {opt.svd, opt.centered, opt.workers});
    const double elapsed = seconds_since(start);

    if (opt.format == OutputFormat::text) {
        out << "cv_table (" << plan.folds.size() << " folds, " << (opt.stratified ? "stratified" : "unstratified")
            << ", seed " << opt.seed << ")\n";
        out << "  " << std::setw(12) << "lambda" << std::setw(8) << "k" << "  mean_macro_f1  fold_f1\n";
        for (const GridCell &c : result.table) {
            out << "  " << std::setw(12) << num(c.lambda) << std::setw(8) << c.k << "  " << std::setw(13)
                << num(c.mean_f1) << " ";
            for (double f : c.fold_f1) {
                out << ' ' << num(f);
            }
            out << '\n';
        }
    } else {
        for (const GridCell &c : result.table) {
            emit(out, opt.format, "cv_cell",
                 {{"lambda", c.lambda}, {"k", c.k}, {"mean_macro_f1", c.mean_f1}, {"fold_macro_f1", c.fold_f1}});
        }
    }
    emit(out, opt.format, "cv_selection",
         {{"best_lambda", result.best_lambda},
          {"best_k", result.best_k},
          {"best_mean_macro_f1", result.best().mean_f1},
          {"selection_rule", result.selection_rule},
          {"folds", plan.folds.size()},
          {"seed", opt.seed},
          {"svd", to_string(opt.svd.method)},
          {"seconds", elapsed}});

    if (opt.retrain_out) {
        const SvdLsModel model = fit_svdls(data, {result.best_lambda, result.best_k, opt.svd, opt.centered});
        io::save_model(model, *opt.retrain_out);
        emit(out, opt.format, "cv_retrain",
             {{"model_dir", opt.retrain_out->string()},
              {"train_accuracy", accuracy(predict(model, data.features), data.labels)}});
    }
    return result;
}

PairedTestResult cmd_compare(const CompareOptions &opt, std::ostream &out) {
    if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) {
        throw UsageError("--alpha must lie in (0, 1)");
    }
    const auto labels = io::read_labels(opt.labels);
    const auto a_file = io::read_predictions(opt.predictions_a);
    const auto b_file = io::read_predictions(opt.predictions_b);
    const AlignedLabels a = align(labels, {a_file, b_file}, {opt.predictions_a, opt.predictions_b});
    const PairedTestResult r = bowker_test(a.predicted[0], a.predicted[1], a.classes.size(), opt.dof_rule);

    if (opt.format == OutputFormat::text) {
        out << "paired_table (rows = A, cols = B)\n" << format_table(r.table, a.classes, "A\\B");
    } else {
        emit(out, opt.format, "paired_table", {{"classes", a.classes}, {"rows_a_cols_b", table_json(r.table)}});
    }
    emit(out, opt.format, "bowker_test",
         {{"n", a.truth.size()},
          {"statistic", r.statistic},
          {"dof", r.dof},
          {"dof_rule", opt.dof_rule == BowkerDof::observed_pairs ? "observed_pairs" : "all_pairs"},
          {"p_value", r.p_value},
          {"alpha", opt.alpha},
          {"significant", r.dof > 0 && r.p_value < opt.alpha},
          {"accuracy_a", accuracy(a.predicted[0], a.truth)},
          {"accuracy_b", accuracy(a.predicted[1], a.truth)}});
    return r;
}

BenchReport cmd_bench(const BenchOptions &opt, std::ostream &out) {
    if (static_cast<double>(opt.n) * static_cast<double>(opt.d) > kBenchMaxCells) {
        throw UsageError("bench size N*d = " + std::to_string(opt.n * opt.d) + " exceeds the 1e8 guard");
    }
    if (opt.m < 2 || opt.d < opt.m || opt.n < opt.m) {
        throw UsageError("bench needs m >= 2, d >= m and N >= m");
    }
    require_k(opt.k, opt.d, opt.n);
    if (opt.k + opt.oversample > std::min(opt.n, opt.d)) {
        throw UsageError("bench k + oversample exceeds min(N, d)");
    }
    if (opt.repeats < 1) {
        throw UsageError("--repeats must be at least 1");
    }
    try {
        opt.adam.validate();
    } catch (const ArgumentError &e) {
        throw UsageError(e.what());
    }

    const std::size_t per_class = (opt.n + opt.m - 1) / opt.m;
    const LabeledDataset full = io::synth_dataset(per_class, opt.d, opt.m, opt.separation, opt.seed);
    std::vector<std::size_t> rows(opt.n);
    for (std::size_t i = 0; i < opt.n; ++i) {
        rows[i] = i;
    }
    const LabeledDataset data = full.subset(rows);

    SvdMode mode;
    mode.method = SvdMethod::randomized;
    mode.randomized = {opt.oversample, opt.power_iters, opt.seed};

    BenchReport report;
    report.config = {opt.n, opt.d, opt.k, opt.m, opt.power_iters, opt.adam.epochs, opt.adam.batch_size};
    report.flops = flop_model(report.config);
    report.threads = kernels::max_threads();

    std::vector<double> svd_times;
    std::vector<double> adam_times;
    for (std::size_t rep = 0; rep < opt.repeats; ++rep) {
        auto t0 = std::chrono::steady_clock::now();
        const SvdLsModel model = fit_svdls(data, {opt.lambda, opt.k, mode, false});
        svd_times.push_back(seconds_since(t0));
        report.svdls_train_accuracy = accuracy(predict(model, data.features), data.labels);

        t0 = std::chrono::steady_clock::now();
        const AdamFitResult adam = fit_adam_baseline(data, opt.adam);
        adam_times.push_back(seconds_since(t0));
        report.adam_train_accuracy = accuracy(predict(adam.model, data.features), data.labels);
    }
    report.svdls_seconds = median(svd_times);
    report.adam_seconds = median(adam_times);
    report.speedup = report.adam_seconds / report.svdls_seconds;

    const FlopModel &f = report.flops;
    emit(out, opt.format, "bench_config",
         {{"n", opt.n},
          {"d", opt.d},
          {"k", opt.k},
          {"m", opt.m},
          {"q", opt.power_iters},
          {"oversample", opt.oversample},
          {"epochs", opt.adam.epochs},
          {"batch_size", opt.adam.batch_size},
          {"learning_rate", opt.adam.learning_rate},
          {"repeats", opt.repeats},
          {"threads", report.threads}});
    emit(out, opt.format, "bench_flops",
         {{"randomized_svd", f.randomized_svd},
          {"projection", f.projection},
          {"gram", f.gram},
          {"cross", f.cross},
          {"solve", f.solve},
          {"back_projection", f.back_projection},
          {"svdls_total", f.svdls_total},
          {"svdls_order", f.svdls_order},
          {"iterative_steps", f.iterative_steps},
          {"iterative_per_step", f.iterative_per_step},
          {"iterative_total", f.iterative_total},
          {"iterative_order", f.iterative_order},
          {"predicted_speedup", f.predicted_speedup()}});
    emit(out, opt.format, "bench_timing",
         {{"svdls_seconds", report.svdls_seconds},
          {"adam_seconds", report.adam_seconds},
          {"measured_speedup", report.speedup},
          {"reported_speedup", kReportedSpeedup},
          {"svdls_train_accuracy", report.svdls_train_accuracy},
          {"adam_train_accuracy", report.adam_train_accuracy}});
    return report;
}

SynthPaths cmd_synth(const SynthOptions &opt, std::ostream &out) {
    if (opt.out_prefix.empty()) {
        throw UsageError("synth needs --out");
    }
    if (opt.m < 2 || opt.d < opt.m || opt.n_per_class < 1) {
        throw UsageError("synth needs m >= 2, d >= m and n-per-class >= 1");
    }
    if (!std::isfinite(opt.separation)) {
        throw UsageError("--separation must be finite");
    }
    const LabeledDataset data = io::synth_dataset(opt.n_per_class, opt.d, opt.m, opt.separation, opt.seed);
    SynthPaths paths{opt.out_prefix.string() + "_features.npy", opt.out_prefix.string() + "_labels.csv"};
    if (opt.out_prefix.has_parent_path()) {
        std::filesystem::create_directories(opt.out_prefix.parent_path());
    }
    io::write_npy(data.features, paths.features, opt.float32 ? io::NpyDtype::f4 : io::NpyDtype::f8);
    std::vector<std::string> names;
    names.reserve(data.labels.size());
    for (std::size_t l : data.labels) {
        names.push_back(data.classes[l]);
    }
    io::write_labels(paths.labels, io::synth_ids(data.num_samples()), names);
    emit(out, opt.format, "synth_summary",
         {{"n", data.num_samples()},
          {"d", opt.d},
          {"m", opt.m},
          {"separation", opt.separation},
          {"seed", opt.seed},
          {"features", paths.features.string()},
          {"labels", paths.labels.string()}});
    return paths;
}

} // namespace svdls::cli
