#include "svdls/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace svdls;
using namespace svdls::cli;

struct SvdFlags {
    std::string method = "randomized";
    std::size_t oversample = 10;
    std::size_t power_iters = 4;
    std::uint64_t seed = 0;

    void attach(CLI::App *app) {
        app->add_option("--svd", method, "SVD method")->check(CLI::IsMember({"exact", "randomized"}));
        app->add_option("--oversample", oversample, "randomized SVD oversampling");
        app->add_option("--power-iters", power_iters, "randomized SVD power iterations");
        app->add_option("--seed", seed, "random seed");
    }

    [[nodiscard]] SvdMode mode() const {
        SvdMode m;
        m.method = parse_svd_method(method);
        m.randomized = {oversample, power_iters, seed};
        return m;
    }
};

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"SVD-based least-squares classification on precomputed feature matrices"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "text";
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json-lines"}));

    // train
    TrainOptions train;
    SvdFlags train_svd;
    auto *train_cmd = app.add_subcommand("train", "fit an SVD-LS model and save the bundle");
    train_cmd->add_option("--features", train.features, "feature matrix (.npy or .csv)")->required();
    train_cmd->add_option("--labels", train.labels, "labels CSV (id,label)")->required();
    train_cmd->add_option("--lambda", train.lambda, "ridge regularization strength");
    train_cmd->add_option("--k", train.k, "retained singular components")->required();
    train_cmd->add_flag("--centered", train.centered, "center features and labels before fitting");
    train_cmd->add_option("--out", train.out_dir, "model bundle directory")->required();
    train_svd.attach(train_cmd);

    // predict
    PredictOptions pred;
    std::string pred_ids;
    auto *pred_cmd = app.add_subcommand("predict", "classify a feature matrix with a saved model");
    pred_cmd->add_option("--model", pred.model_dir, "model bundle directory")->required();
    pred_cmd->add_option("--features", pred.features, "feature matrix (.npy or .csv)")->required();
    pred_cmd->add_option("--labels", pred_ids, "labels CSV whose ids name the rows");
    pred_cmd->add_option("--out", pred.out, "predictions CSV")->required();
    pred_cmd->add_flag("--scores", pred.with_scores, "append raw score_<class> columns");

    // evaluate
    EvaluateOptions eval;
    auto *eval_cmd = app.add_subcommand("evaluate", "metrics of a predictions file against labels");
    eval_cmd->add_option("--predictions", eval.predictions, "predictions CSV")->required();
    eval_cmd->add_option("--labels", eval.labels, "labels CSV (id,label)")->required();

    // cv
    CvOptions cv;
    SvdFlags cv_svd;
    std::string lambda_grid;
    std::string k_grid;
    std::string retrain;
    bool unstratified = false;
    auto *cv_cmd = app.add_subcommand("cv", "cross-validated grid search over (lambda, k)");
    cv_cmd->add_option("--features", cv.features, "training feature matrix")->required();
    cv_cmd->add_option("--labels", cv.labels, "training labels CSV")->required();
    cv_cmd->add_option("--lambda-grid", lambda_grid, "comma-separated lambdas");
    cv_cmd->add_option("--k-grid", k_grid, "comma-separated k values ('d' = feature width)");
    cv_cmd->add_option("--folds", cv.folds, "number of folds");
    cv_cmd->add_option("--workers", cv.workers, "threads evaluating folds");
    cv_cmd->add_flag("--centered", cv.centered, "center features and labels before fitting");
    cv_cmd->add_flag("--unstratified", unstratified, "plain shuffled folds");
    cv_cmd->add_option("--out", retrain, "refit with the selected pair and save the model here");
    cv_svd.attach(cv_cmd);

    // compare
    CompareOptions cmp;
    bool all_pairs = false;
    auto *cmp_cmd = app.add_subcommand("compare", "McNemar-Bowker test between two prediction files");
    cmp_cmd->add_option("--predictions-a", cmp.predictions_a, "predictions of model A")->required();
    cmp_cmd->add_option("--predictions-b", cmp.predictions_b, "predictions of model B")->required();
    cmp_cmd->add_option("--labels", cmp.labels, "labels CSV naming the samples")->required();
    cmp_cmd->add_option("--alpha", cmp.alpha, "significance level");
    cmp_cmd->add_flag("--all-pairs-dof", all_pairs, "use m(m-1)/2 degrees of freedom");

    // bench
    BenchOptions bench;
    auto *bench_cmd = app.add_subcommand("bench", "analytic FLOPs and measured fit time, SVD-LS vs Adam");
    bench_cmd->add_option("--n", bench.n, "samples");
    bench_cmd->add_option("--d", bench.d, "feature width");
    bench_cmd->add_option("--k", bench.k, "retained components");
    bench_cmd->add_option("--m", bench.m, "classes");
    bench_cmd->add_option("--power-iters", bench.power_iters, "randomized SVD power iterations");
    bench_cmd->add_option("--oversample", bench.oversample, "randomized SVD oversampling");
    bench_cmd->add_option("--lambda", bench.lambda, "ridge regularization strength");
    bench_cmd->add_option("--epochs", bench.adam.epochs, "Adam epochs");
    bench_cmd->add_option("--batch-size", bench.adam.batch_size, "Adam batch size");
    bench_cmd->add_option("--lr", bench.adam.learning_rate, "Adam learning rate");
    bench_cmd->add_option("--weight-decay", bench.adam.weight_decay, "AdamW decoupled weight decay");
    bench_cmd->add_option("--seed", bench.seed, "random seed");
    bench_cmd->add_option("--repeats", bench.repeats, "timing repeats (median reported)");

    // synth
    SynthOptions synth;
    auto *synth_cmd = app.add_subcommand("synth", "write a synthetic Gaussian-cluster dataset");
    synth_cmd->add_option("--n-per-class", synth.n_per_class, "samples per class");
    synth_cmd->add_option("--d", synth.d, "feature width");
    synth_cmd->add_option("--m", synth.m, "classes");
    synth_cmd->add_option("--separation", synth.separation, "distance of class means from the origin");
    synth_cmd->add_option("--seed", synth.seed, "random seed");
    synth_cmd->add_option("--out", synth.out_prefix, "output prefix")->required();
    synth_cmd->add_flag("--float32", synth.float32, "write 32-bit features");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const OutputFormat fmt = parse_format(format);
        if (*train_cmd) {
            train.svd = train_svd.mode();
            train.format = fmt;
            (void)cmd_train(train, std::cout);
        } else if (*pred_cmd) {
            if (!pred_ids.empty()) {
                pred.ids_from = pred_ids;
            }
            pred.format = fmt;
            (void)cmd_predict(pred, std::cout);
        } else if (*eval_cmd) {
            eval.format = fmt;
            (void)cmd_evaluate(eval, std::cout);
        } else if (*cv_cmd) {
            cv.svd = cv_svd.mode();
            cv.seed = cv_svd.seed;
            cv.stratified = !unstratified;
            if (!lambda_grid.empty()) {
                cv.lambda_grid = lambda_grid;
            }
            if (!k_grid.empty()) {
                cv.k_grid = k_grid;
            }
            if (!retrain.empty()) {
                cv.retrain_out = retrain;
            }
            cv.format = fmt;
            (void)cmd_cv(cv, std::cout);
        } else if (*cmp_cmd) {
            cmp.dof_rule = all_pairs ? BowkerDof::all_pairs : BowkerDof::observed_pairs;
            cmp.format = fmt;
            (void)cmd_compare(cmp, std::cout);
        } else if (*bench_cmd) {
            bench.adam.seed = bench.seed;
            bench.format = fmt;
            (void)cmd_bench(bench, std::cout);
        } else if (*synth_cmd) {
            synth.format = fmt;
            (void)cmd_synth(synth, std::cout);
        }
    } catch (const std::exception &e) {
        std::cerr << "svdls: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return 0;
}
