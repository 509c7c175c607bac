#include "svdls/io.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

namespace svdls::io {

LabelFile read_labels(const std::filesystem::path &path, const std::optional<std::vector<std::string>> &classes) {
    const auto lines = detail::read_lines(path);
    if (lines.empty()) {
        throw IoError(path.string() + ": empty label file");
    }
    if (lines.front() != "id,label") {
        throw IoError(path.string() + ": header must be 'id,label', got '" + lines.front() + "'");
    }
    LabelFile out;
    std::unordered_set<std::string> seen;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto fields = detail::split(lines[r]);
        if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
            throw IoError(path.string() + ": line " + std::to_string(r + 1) + " must have exactly 'id,label'");
        }
        if (!seen.insert(fields[0]).second) {
            throw IoError(path.string() + ": duplicate id '" + fields[0] + "' on line " + std::to_string(r + 1));
        }
        out.ids.push_back(fields[0]);
        out.labels.push_back(fields[1]);
    }
    if (out.ids.empty()) {
        throw IoError(path.string() + ": label file has a header but no rows");
    }

    if (classes) {
        out.classes = *classes;
    } else {
        const std::set<std::string> unique(out.labels.begin(), out.labels.end());
        out.classes.assign(unique.begin(), unique.end());
    }
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < out.classes.size(); ++i) {
        if (!index.emplace(out.classes[i], i).second) {
            throw ArgumentError("class list repeats '" + out.classes[i] + "'");
        }
    }
    out.indices.reserve(out.labels.size());
    for (std::size_t r = 0; r < out.labels.size(); ++r) {
        const auto it = index.find(out.labels[r]);
        if (it == index.end()) {
            throw IoError(path.string() + ": label '" + out.labels[r] + "' of id '" + out.ids[r] +
                          "' is not in the class list");
        }
        out.indices.push_back(it->second);
    }
    return out;
}

void write_labels(const std::filesystem::path &path, const std::vector<std::string> &ids,
                  const std::vector<std::string> &labels) {
    if (ids.size() != labels.size()) {
        throw DimensionError("write_labels: ids and labels differ in length");
    }
    std::string text = "id,label\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        text += ids[i] + "," + labels[i] + "\n";
    }
    detail::write_text(path, text);
}

LabeledDataset load_dataset(const std::filesystem::path &features, const LabelFile &labels) {
    LabeledDataset data;
    data.features = read_features(features);
    if (data.features.rows() != labels.size()) {
        throw DimensionError(features.string() + " has " + std::to_string(data.features.rows()) +
                             " rows but the label file has " + std::to_string(labels.size()));
    }
    data.labels = labels.indices;
    data.classes = labels.classes;
    return data;
}

void write_predictions(const std::filesystem::path &path, const std::vector<std::string> &ids,
                       const std::vector<std::size_t> &predicted, const std::vector<std::string> &classes,
                       const Matrix *scores) {
    if (ids.size() != predicted.size() || (scores != nullptr && scores->rows() != ids.size())) {
        throw DimensionError("write_predictions: ids, predictions and scores differ in length");
    }
    std::string text = "id,predicted_label";
    if (scores != nullptr) {
        for (const auto &c : classes) {
            text += ",score_" + c;
        }
    }
    text.push_back('\n');
    for (std::size_t i = 0; i < ids.size(); ++i) {
        text += ids[i] + "," + classes.at(predicted[i]);
        if (scores != nullptr) {
            for (double s : scores->row(i)) {
                text += "," + detail::format_double(s);
            }
        }
        text.push_back('\n');
    }
    detail::write_text(path, text);
}

PredictionFile read_predictions(const std::filesystem::path &path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty()) {
        throw IoError(path.string() + ": empty prediction file");
    }
    const auto header = detail::split(lines.front());
    if (header.size() < 2 || header[0] != "id" || header[1] != "predicted_label") {
        throw IoError(path.string() + ": header must start with 'id,predicted_label'");
    }
    PredictionFile out;
    std::unordered_set<std::string> seen;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto fields = detail::split(lines[r]);
        if (fields.size() != header.size()) {
            throw IoError(path.string() + ": line " + std::to_string(r + 1) + " has " + std::to_string(fields.size()) +
                          " fields, expected " + std::to_string(header.size()));
        }
        if (!seen.insert(fields[0]).second) {
            throw IoError(path.string() + ": duplicate id '" + fields[0] + "'");
        }
        out.ids.push_back(fields[0]);
        out.labels.push_back(fields[1]);
    }
    return out;
}

} // namespace svdls::io
