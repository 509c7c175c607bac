#include "support/oracles.hpp"

#include "svdls/commands.hpp"
#include "svdls/io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <unistd.h>

using namespace svdls;
using namespace svdls::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("svdls_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path operator/(const std::string &s) const { return path / s; }
};

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

SynthPaths make_synth(const TempDir &tmp, const std::string &prefix, std::size_t n, std::size_t d, double sep,
                      std::uint64_t seed) {
    SynthOptions o;
    o.n_per_class = n;
    o.d = d;
    o.m = 3;
    o.separation = sep;
    o.seed = seed;
    o.out_prefix = tmp / prefix;
    std::ostringstream sink;
    return cmd_synth(o, sink);
}

std::vector<json> json_lines(const std::string &text) {
    std::vector<json> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        out.push_back(json::parse(line));
    }
    return out;
}

struct TextRecord {
    std::string name;
    std::map<std::string, std::string> fields;
    std::vector<std::string> table_rows;
};

TextRecord &last(std::vector<TextRecord> &v) { return v.back(); }

std::vector<TextRecord> text_records(const std::string &text) {
    std::vector<TextRecord> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("  ", 0) != 0) {
            out.push_back({line.substr(0, line.find(' ')), {}, {}});
            continue;
        }
        const auto colon = line.find(": ");
        if (colon == std::string::npos) {
            last(out).table_rows.push_back(line);
        } else {
            last(out).fields[line.substr(2, colon - 2)] = line.substr(colon + 2);
        }
    }
    return out;
}

FlopModel flop_oracle(std::uint64_t n, std::uint64_t d, std::uint64_t k, std::uint64_t m, std::uint64_t q,
                      std::uint64_t e, std::uint64_t b) {
    return oracle::flops({n, d, k, m, q, e, b});
}

} // namespace

TEST_CASE("synth -> train -> predict -> evaluate reproduces the training accuracy") {
    TempDir tmp;
    const SynthPaths p = make_synth(tmp, "train", 60, 10, 3.0, 1);
    CHECK(p.features == tmp / "train_features.npy");
    CHECK(p.labels == tmp / "train_labels.csv");

    TrainOptions t;
    t.features = p.features;
    t.labels = p.labels;
    t.lambda = 0.5;
    t.k = 6;
    t.out_dir = tmp / "model";
    std::ostringstream log;
    const TrainSummary s = cmd_train(t, log);
    CHECK(log.str().find("train_summary") != std::string::npos);
    CHECK(s.k == 6);
    CHECK(s.condition == doctest::Approx(s.sigma_first / s.sigma_last));

    PredictOptions pr;
    pr.model_dir = t.out_dir;
    pr.features = p.features;
    pr.ids_from = p.labels;
    pr.out = tmp / "pred.csv";
    pr.with_scores = true;
    CHECK(cmd_predict(pr, log) == 180);
    CHECK(slurp(pr.out).rfind("id,predicted_label,score_class0,score_class1,score_class2\n", 0) == 0);

    EvaluateOptions ev;
    ev.predictions = pr.out;
    ev.labels = p.labels;
    const MetricsReport r = cmd_evaluate(ev, log);
    CHECK(r.accuracy == s.train_accuracy);
}

TEST_CASE("train on separable synthetic data generalizes to held-out data") {
    TempDir tmp;
    const SynthPaths train = make_synth(tmp, "tr", 200, 16, 8.0, 2);
    const SynthPaths test = make_synth(tmp, "te", 200, 16, 8.0, 3);
    TrainOptions t;
    t.features = train.features;
    t.labels = train.labels;
    t.k = 16;
    t.out_dir = tmp / "model";
    std::ostringstream log;
    (void)cmd_train(t, log);
    PredictOptions pr{t.out_dir, test.features, test.labels, tmp / "p.csv", false};
    (void)cmd_predict(pr, log);
    CHECK(cmd_evaluate({pr.out, test.labels}, log).accuracy >= 0.99);
}

TEST_CASE("train rejects k > d naming both values") {
    TempDir tmp;
    const SynthPaths p = make_synth(tmp, "s", 20, 8, 2.0, 1);
    TrainOptions t;
    t.features = p.features;
    t.labels = p.labels;
    t.k = 9;
    t.out_dir = tmp / "m";
    std::ostringstream log;
    try {
        (void)cmd_train(t, log);
        FAIL("expected UsageError");
    } catch (const UsageError &e) {
        const std::string msg = e.what();
        CHECK(msg.find('9') != std::string::npos);
        CHECK(msg.find("d=8") != std::string::npos);
        CHECK(exit_code_for(e) == 2);
    }
    t.k = 3;
    t.lambda = -1;
    CHECK_THROWS_AS((void)cmd_train(t, log), UsageError);
    t.lambda = 1;
    t.features = tmp / "missing.npy";
    try {
        (void)cmd_train(t, log);
        FAIL("expected IoError");
    } catch (const std::exception &e) {
        CHECK(exit_code_for(e) == 1);
        CHECK(std::string(e.what()).find("missing.npy") != std::string::npos);
    }
}

TEST_CASE("rerunning train with the same seed gives byte-identical weights") {
    TempDir tmp;
    const SynthPaths p = make_synth(tmp, "s", 40, 20, 2.0, 4);
    TrainOptions t;
    t.features = p.features;
    t.labels = p.labels;
    t.k = 5;
    t.svd.randomized.seed = 11;
    std::ostringstream log;
    t.out_dir = tmp / "a";
    (void)cmd_train(t, log);
    t.out_dir = tmp / "b";
    (void)cmd_train(t, log);
    CHECK(slurp(tmp / "a" / "weights.npy") == slurp(tmp / "b" / "weights.npy"));
    CHECK(slurp(tmp / "a" / "meta.json") == slurp(tmp / "b" / "meta.json"));
}

TEST_CASE("cv prints the full table and can retrain the winner") {
    TempDir tmp;
    const SynthPaths p = make_synth(tmp, "s", 30, 12, 3.0, 5);
    CvOptions c;
    c.features = p.features;
    c.labels = p.labels;
    c.lambda_grid = "0.01,1,1e9";
    c.k_grid = "2,d";
    c.folds = 3;
    c.svd = SvdMode::exact();
    c.retrain_out = tmp / "best";
    c.format = OutputFormat::json_lines;
    std::ostringstream out;
    const GridSearchResult r = cmd_cv(c, out);
    CHECK(r.table.size() == 6);
    const auto lines = json_lines(out.str());
    std::size_t cells = 0;
    for (const auto &l : lines) {
        cells += l["record"] == "cv_cell";
    }
    CHECK(cells == 6);
    CHECK(fs::exists(tmp / "best" / "weights.npy"));
    CHECK(io::load_model(tmp / "best").k == r.best_k);

    c.k_grid = "0";
    CHECK_THROWS_AS((void)cmd_cv(c, out), UsageError);
    c.k_grid = "50";
    CHECK_THROWS_AS((void)cmd_cv(c, out), UsageError);
}

TEST_CASE("compare reports the paired test on aligned prediction files") {
    TempDir tmp;
    io::write_labels(tmp / "y.csv", {"a", "b", "c", "d", "e"}, {"x", "y", "x", "y", "x"});
    io::write_predictions(tmp / "p1.csv", {"a", "b", "c", "d", "e"}, {0, 1, 0, 1, 0}, {"x", "y"});
    // same samples in a different order
    io::write_predictions(tmp / "p2.csv", {"e", "d", "c", "b", "a"}, {1, 1, 1, 0, 0}, {"x", "y"});
    CompareOptions c{tmp / "p1.csv", tmp / "p2.csv", tmp / "y.csv"};
    std::ostringstream out;
    const PairedTestResult r = cmd_compare(c, out);
    CHECK(r.table(0, 1) == 2); // c, e
    CHECK(r.table(1, 0) == 1); // b
    CHECK(r.statistic == doctest::Approx(1.0 / 3.0));
    CHECK(out.str().find("bowker_test") != std::string::npos);

    io::write_predictions(tmp / "p3.csv", {"a", "b"}, {0, 1}, {"x", "y"});
    CHECK_THROWS((void)cmd_compare({tmp / "p1.csv", tmp / "p3.csv", tmp / "y.csv"}, out));
}

TEST_CASE("bench at a small size reports consistent numbers") {
    BenchOptions b;
    b.n = 300;
    b.d = 40;
    b.k = 8;
    b.adam.epochs = 2;
    b.repeats = 1;
    b.format = OutputFormat::json_lines;
    std::ostringstream out;
    const BenchReport r = cmd_bench(b, out);
    CHECK(r.speedup == r.adam_seconds / r.svdls_seconds);
    CHECK(r.flops.randomized_svd == flop_oracle(300, 40, 8, 3, 4, 2, 16).randomized_svd);
    const auto lines = json_lines(out.str());
    REQUIRE(lines.size() == 3);
    CHECK(lines[2]["reported_speedup"] == 15.0);
    CHECK(lines[1]["svdls_total"] == r.flops.svdls_total);

    b.n = 200000;
    b.d = 1000;
    CHECK_THROWS_AS((void)cmd_bench(b, out), UsageError);
}

TEST_CASE("flop model on the timing configuration") {
    const FlopModel f = flop_model({4000, 768, 128, 3, 4, 30, 16});
    CHECK(f.randomized_svd - 2ULL * 4000 * 128 * 128 - 128ULL * 128 * 768 == 3932160000ULL);
    CHECK(f.iterative_steps == 7500);
}

TEST_CASE("property: flop model equals the closed forms") {
    std::mt19937_64 g(3);
    for (int i = 0; i < 10; ++i) {
        const std::uint64_t n = 100 + g() % 10000;
        const std::uint64_t d = 10 + g() % 2000;
        const std::uint64_t k = 1 + g() % d;
        const std::uint64_t m = 2 + g() % 10;
        const std::uint64_t q = g() % 8;
        const std::uint64_t e = 1 + g() % 50;
        const std::uint64_t b = 1 + g() % 64;
        const FlopModel f = flop_model({n, d, k, m, q, e, b});
        const FlopModel o = flop_oracle(n, d, k, m, q, e, b);
        CHECK(f.randomized_svd == o.randomized_svd);
        CHECK(f.projection == o.projection);
        CHECK(f.gram == o.gram);
        CHECK(f.cross == o.cross);
        CHECK(f.solve == o.solve);
        CHECK(f.back_projection == o.back_projection);
        CHECK(f.svdls_total == o.svdls_total);
        CHECK(f.svdls_order == o.svdls_order);
        CHECK(f.iterative_steps == o.iterative_steps);
        CHECK(f.iterative_per_step == o.iterative_per_step);
        CHECK(f.iterative_total == o.iterative_total);
        CHECK(f.iterative_order == o.iterative_order);
    }
}

TEST_CASE("text and json-lines outputs carry identical numbers") {
    TempDir tmp;
    const SynthPaths p = make_synth(tmp, "s", 30, 6, 1.0, 6);
    TrainOptions t;
    t.features = p.features;
    t.labels = p.labels;
    t.k = 4;
    t.svd = SvdMode::exact();
    t.out_dir = tmp / "m";
    std::ostringstream log;
    (void)cmd_train(t, log);
    PredictOptions pr{t.out_dir, p.features, p.labels, tmp / "p.csv", false};
    (void)cmd_predict(pr, log);

    EvaluateOptions ev{pr.out, p.labels, OutputFormat::text};
    std::ostringstream text;
    (void)cmd_evaluate(ev, text);
    ev.format = OutputFormat::json_lines;
    std::ostringstream lines;
    (void)cmd_evaluate(ev, lines);

    const auto js = json_lines(lines.str());
    const auto tx = text_records(text.str());
    REQUIRE(js.size() == tx.size());
    std::size_t numbers = 0;
    for (std::size_t i = 0; i < js.size(); ++i) {
        CHECK(js[i]["record"] == tx[i].name);
        if (js[i]["record"] == "confusion") {
            // text renders the table; compare its cells row by row
            const auto &rows = js[i]["rows_true_cols_predicted"];
            REQUIRE(tx[i].table_rows.size() == rows.size() + 1);
            for (std::size_t r = 0; r < rows.size(); ++r) {
                std::istringstream cells(tx[i].table_rows[r + 1]);
                std::string label;
                cells >> label;
                CHECK(label == js[i]["classes"][r]);
                for (const auto &v : rows[r]) {
                    std::size_t c = 0;
                    cells >> c;
                    CHECK(c == v.get<std::size_t>());
                    ++numbers;
                }
            }
            continue;
        }
        for (const auto &[key, value] : js[i].items()) {
            if (key == "record") {
                continue;
            }
            REQUIRE(tx[i].fields.count(key) == 1);
            const std::string rendered = value.is_string() ? value.get<std::string>() : value.dump();
            CHECK(tx[i].fields.at(key) == rendered);
            numbers += value.is_number();
        }
    }
    CHECK(numbers > 10);
}

TEST_CASE("grid and format parsing") {
    CHECK(parse_lambda_grid("1e-4, 0.5,2") == std::vector<double>{1e-4, 0.5, 2.0});
    CHECK_THROWS_AS((void)parse_lambda_grid("1,x"), UsageError);
    CHECK_THROWS_AS((void)parse_lambda_grid("-1"), UsageError);
    CHECK(parse_k_grid("4,d", 9) == std::vector<std::size_t>{4, 9});
    CHECK(default_k_grid(768, 3200) == std::vector<std::size_t>{16, 32, 64, 128, 256, 768});
    CHECK(default_k_grid(20, 15) == std::vector<std::size_t>{15});
    CHECK(default_lambda_grid().size() == 7);
    CHECK(parse_format("json-lines") == OutputFormat::json_lines);
    CHECK_THROWS_AS((void)parse_format("yaml"), UsageError);
}
