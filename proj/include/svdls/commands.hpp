#pragma once

// Implementations behind the `svdls` command-line tool. Each command writes
// its report to `out` as human-readable text or as JSON lines and throws on
// failure: UsageError for bad parameters (exit code 2), any other error for
// data or numeric failures (exit code 1).

#include "svdls/classifier.hpp"
#include "svdls/error.hpp"
#include "svdls/eval.hpp"
#include "svdls/flops.hpp"
#include "svdls/linalg.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace svdls::cli {

class UsageError : public Error {
public:
    using Error::Error;
};

enum class OutputFormat { text, json_lines };

[[nodiscard]] OutputFormat parse_format(const std::string &s);

/// Map an exception to the process exit code.
[[nodiscard]] int exit_code_for(const std::exception &e) noexcept;

/// Comma-separated reals, e.g. "1e-4,0.01,1".
[[nodiscard]] std::vector<double> parse_lambda_grid(const std::string &s);
/// Comma-separated counts; the token "d" stands for the feature width.
[[nodiscard]] std::vector<std::size_t> parse_k_grid(const std::string &s, std::size_t d);
/// 10^-4 ... 10^2, seven points.
[[nodiscard]] std::vector<double> default_lambda_grid();
/// {16, 32, 64, 128, 256, d} restricted to values <= limit.
[[nodiscard]] std::vector<std::size_t> default_k_grid(std::size_t d, std::size_t limit);

struct TrainOptions {
    std::filesystem::path features;
    std::filesystem::path labels;
    double lambda = 1.0;
    std::size_t k = 0;
    SvdMode svd{};
    bool centered = false;
    std::filesystem::path out_dir;
    OutputFormat format = OutputFormat::text;
};

struct TrainSummary {
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t m = 0;
    std::size_t k = 0;
    double lambda = 0.0;
    double sigma_first = 0.0;
    double sigma_last = 0.0;
    double condition = 0.0; ///< sigma_1 / sigma_k
    double train_accuracy = 0.0;
    double fit_seconds = 0.0;
};

TrainSummary cmd_train(const TrainOptions &opt, std::ostream &out);

struct PredictOptions {
    std::filesystem::path model_dir;
    std::filesystem::path features;
    /// Optional "id,label" file supplying sample ids; row numbers otherwise.
    std::optional<std::filesystem::path> ids_from;
    std::filesystem::path out;
    bool with_scores = false;
    OutputFormat format = OutputFormat::text;
};

std::size_t cmd_predict(const PredictOptions &opt, std::ostream &out);

struct EvaluateOptions {
    std::filesystem::path predictions;
    std::filesystem::path labels;
    OutputFormat format = OutputFormat::text;
};

MetricsReport cmd_evaluate(const EvaluateOptions &opt, std::ostream &out);

struct CvOptions {
    std::filesystem::path features;
    std::filesystem::path labels;
    std::optional<std::string> lambda_grid;
    std::optional<std::string> k_grid;
    std::size_t folds = 5;
    std::uint64_t seed = 0;
    bool stratified = true;
    SvdMode svd{};
    bool centered = false;
    int workers = 1;
    /// Refit on all training data with the selected pair and save here.
    std::optional<std::filesystem::path> retrain_out;
    OutputFormat format = OutputFormat::text;
};

GridSearchResult cmd_cv(const CvOptions &opt, std::ostream &out);

struct CompareOptions {
    std::filesystem::path predictions_a;
    std::filesystem::path predictions_b;
    std::filesystem::path labels;
    BowkerDof dof_rule = BowkerDof::observed_pairs;
    double alpha = 0.05;
    OutputFormat format = OutputFormat::text;
};

PairedTestResult cmd_compare(const CompareOptions &opt, std::ostream &out);

struct BenchOptions {
    std::size_t n = 4000;
    std::size_t d = 768;
    std::size_t k = 128;
    std::size_t m = 3;
    std::size_t power_iters = 4;
    std::size_t oversample = 10;
    double lambda = 1.0;
    double separation = 2.0;
    AdamBaselineConfig adam{};
    std::uint64_t seed = 0;
    std::size_t repeats = 3;
    OutputFormat format = OutputFormat::text;
};

inline constexpr double kReportedSpeedup = 15.0;
inline constexpr double kBenchMaxCells = 1e8;

struct BenchReport {
    FlopConfig config;
    FlopModel flops;
    double svdls_seconds = 0.0; ///< median over repeats
    double adam_seconds = 0.0;  ///< median over repeats
    double speedup = 0.0;       ///< adam_seconds / svdls_seconds
    double svdls_train_accuracy = 0.0;
    double adam_train_accuracy = 0.0;
    int threads = 1;
};

BenchReport cmd_bench(const BenchOptions &opt, std::ostream &out);

struct SynthOptions {
    std::size_t n_per_class = 1000;
    std::size_t d = 64;
    std::size_t m = 3;
    double separation = 8.0;
    std::uint64_t seed = 0;
    std::filesystem::path out_prefix;
    bool float32 = false;
    OutputFormat format = OutputFormat::text;
};

struct SynthPaths {
    std::filesystem::path features; ///< <prefix>_features.npy
    std::filesystem::path labels;   ///< <prefix>_labels.csv
};

SynthPaths cmd_synth(const SynthOptions &opt, std::ostream &out);

} // namespace svdls::cli
