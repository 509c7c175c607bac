#pragma once

#include "svdls/classifier.hpp"
#include "svdls/error.hpp"
#include "svdls/matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace svdls::io {

// --- NPY (v1.0, 2-D, little-endian f4/f8, C order) --------------------------

enum class NpyField { open, magic, version, header, dtype, fortran_order, shape, truncated, non_finite };

[[nodiscard]] std::string to_string(NpyField f);

/// Parse failure; `field()` names the offending part of the file.
class NpyError : public IoError {
public:
    NpyError(NpyField field, const std::string &message);
    [[nodiscard]] NpyField field() const noexcept { return field_; }
    [[nodiscard]] const std::string &detail() const noexcept { return detail_; }

private:
    NpyField field_;
    std::string detail_;
};

enum class NpyDtype { f4, f8 };

[[nodiscard]] Matrix read_npy(const std::filesystem::path &path);
[[nodiscard]] Matrix parse_npy(const std::string &bytes);
void write_npy(const Matrix &m, const std::filesystem::path &path, NpyDtype dtype = NpyDtype::f8);
[[nodiscard]] std::string encode_npy(const Matrix &m, NpyDtype dtype = NpyDtype::f8);

// --- CSV matrices (no header, comma separated) ------------------------------

[[nodiscard]] Matrix read_csv_matrix(const std::filesystem::path &path);
void write_csv_matrix(const Matrix &m, const std::filesystem::path &path);

/// Dispatch on extension: ".npy" or ".csv".
[[nodiscard]] Matrix read_features(const std::filesystem::path &path);

// --- labels -----------------------------------------------------------------

struct LabelFile {
    std::vector<std::string> ids;
    std::vector<std::string> labels;
    std::vector<std::string> classes; ///< vocabulary, index order
    std::vector<std::size_t> indices; ///< label of each row as an index into classes

    [[nodiscard]] std::size_t size() const noexcept { return ids.size(); }
};

/// CSV with header "id,label". The vocabulary is the sorted set of labels
/// unless `classes` is given, in which case it is used as is.
[[nodiscard]] LabelFile read_labels(const std::filesystem::path &path,
                                    const std::optional<std::vector<std::string>> &classes = std::nullopt);
void write_labels(const std::filesystem::path &path, const std::vector<std::string> &ids,
                  const std::vector<std::string> &labels);

/// Features + labels as a dataset; row counts must match.
[[nodiscard]] LabeledDataset load_dataset(const std::filesystem::path &features, const LabelFile &labels);

// --- predictions --------------------------------------------------------------

struct PredictionFile {
    std::vector<std::string> ids;
    std::vector<std::string> labels;
};

/// CSV "id,predicted_label[,score_<class>...]".
void write_predictions(const std::filesystem::path &path, const std::vector<std::string> &ids,
                       const std::vector<std::size_t> &predicted, const std::vector<std::string> &classes,
                       const Matrix *scores = nullptr);
[[nodiscard]] PredictionFile read_predictions(const std::filesystem::path &path);

// --- model bundle -------------------------------------------------------------

inline constexpr int kModelFormatVersion = 1;

/// Writes `weights.npy` and `meta.json` into `dir` (created if missing).
void save_model(const SvdLsModel &model, const std::filesystem::path &dir);
[[nodiscard]] SvdLsModel load_model(const std::filesystem::path &dir);

// --- synthetic data -------------------------------------------------------------

/// Class c ~ N(separation * e_c, I_d), `n_per_class` rows each, shuffled.
/// Classes are named "class0", "class1", ...
[[nodiscard]] LabeledDataset synth_dataset(std::size_t n_per_class, std::size_t d, std::size_t m,
                                           double separation, std::uint64_t seed);

/// Sample ids "s000000", "s000001", ... for generated data.
[[nodiscard]] std::vector<std::string> synth_ids(std::size_t n);

} // namespace svdls::io
