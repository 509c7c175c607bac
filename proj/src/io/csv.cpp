#include "svdls/io.hpp"
#include "text_util.hpp"

#include <cmath>

namespace svdls::io {

Matrix read_csv_matrix(const std::filesystem::path &path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty()) {
        throw IoError(path.string() + ": empty CSV matrix");
    }
    std::size_t cols = 0;
    std::vector<double> values;
    for (std::size_t r = 0; r < lines.size(); ++r) {
        const auto fields = detail::split(lines[r]);
        if (r == 0) {
            cols = fields.size();
        } else if (fields.size() != cols) {
            throw IoError(path.string() + ": line " + std::to_string(r + 1) + " has " + std::to_string(fields.size()) +
                          " fields, expected " + std::to_string(cols));
        }
        for (const auto &f : fields) {
            const double v = detail::parse_double(f, path.string() + ":" + std::to_string(r + 1));
            if (!std::isfinite(v)) {
                throw IoError(path.string() + ": non-finite value on line " + std::to_string(r + 1));
            }
            values.push_back(v);
        }
    }
    return Matrix(lines.size(), cols, std::move(values));
}

void write_csv_matrix(const Matrix &m, const std::filesystem::path &path) {
    std::string text;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto r = m.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (j > 0) {
                text.push_back(',');
            }
            text += detail::format_double(r[j]);
        }
        text.push_back('\n');
    }
    detail::write_text(path, text);
}

Matrix read_features(const std::filesystem::path &path) {
    const auto ext = path.extension().string();
    if (ext == ".npy") {
        return read_npy(path);
    }
    if (ext == ".csv") {
        return read_csv_matrix(path);
    }
    throw IoError(path.string() + ": unrecognized feature file extension (expected .npy or .csv)");
}

} // namespace svdls::io
