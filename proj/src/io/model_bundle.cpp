#include "svdls/io.hpp"
#include "text_util.hpp"

#include <json.hpp>

#include <fstream>

namespace svdls::io {

using nlohmann::json;

void save_model(const SvdLsModel &model, const std::filesystem::path &dir) {
    model.validate();
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create model directory " + dir.string() + ": " + ec.message());
    }

    json meta;
    meta["format_version"] = kModelFormatVersion;
    meta["kind"] = to_string(model.kind);
    meta["lambda"] = model.lambda;
    meta["k"] = model.k;
    meta["classes"] = model.classes;
    meta["weights_shape"] = {model.weights.rows(), model.weights.cols()};
    meta["has_bias_row"] = model.has_bias_row;
    meta["centered"] = model.centering.has_value();
    if (model.centering) {
        meta["feature_mean"] = model.centering->feature_mean;
        meta["label_mean"] = model.centering->label_mean;
    }
    meta["singular_values"] = model.singular_values;
    meta["svd"] = {{"method", to_string(model.svd.method)},
                   {"oversample", model.svd.randomized.oversample},
                   {"power_iters", model.svd.randomized.power_iters},
                   {"seed", model.svd.randomized.seed}};

    write_npy(model.weights, dir / "weights.npy", NpyDtype::f8);
    detail::write_text(dir / "meta.json", meta.dump(2) + "\n");
}

SvdLsModel load_model(const std::filesystem::path &dir) {
    std::ifstream in(dir / "meta.json");
    if (!in) {
        throw IoError("cannot open " + (dir / "meta.json").string());
    }
    json meta;
    try {
        meta = json::parse(in);
    } catch (const json::exception &e) {
        throw IoError((dir / "meta.json").string() + ": " + e.what());
    }

    SvdLsModel model;
    try {
        const int version = meta.at("format_version").get<int>();
        if (version != kModelFormatVersion) {
            throw IoError("unsupported model format_version " + std::to_string(version));
        }
        model.kind = parse_model_kind(meta.at("kind").get<std::string>());
        model.lambda = meta.at("lambda").get<double>();
        model.k = meta.at("k").get<std::size_t>();
        model.classes = meta.at("classes").get<std::vector<std::string>>();
        model.has_bias_row = meta.at("has_bias_row").get<bool>();
        if (meta.at("centered").get<bool>()) {
            model.centering = Centering{meta.at("feature_mean").get<std::vector<double>>(),
                                        meta.at("label_mean").get<std::vector<double>>()};
        }
        model.singular_values = meta.value("singular_values", std::vector<double>{});
        const auto &svd = meta.at("svd");
        model.svd.method = parse_svd_method(svd.at("method").get<std::string>());
        model.svd.randomized.oversample = svd.at("oversample").get<std::size_t>();
        model.svd.randomized.power_iters = svd.at("power_iters").get<std::size_t>();
        model.svd.randomized.seed = svd.at("seed").get<std::uint64_t>();

        model.weights = read_npy(dir / "weights.npy");
        const auto shape = meta.at("weights_shape").get<std::vector<std::size_t>>();
        if (shape.size() != 2 || shape[0] != model.weights.rows() || shape[1] != model.weights.cols()) {
            throw IoError("weights.npy shape " + model.weights.shape_string() + " disagrees with meta.json");
        }
    } catch (const json::exception &e) {
        throw IoError((dir / "meta.json").string() + ": " + e.what());
    }
    try {
        model.validate();
    } catch (const Error &e) {
        throw IoError("inconsistent model bundle " + dir.string() + ": " + e.what());
    }
    return model;
}

} // namespace svdls::io
