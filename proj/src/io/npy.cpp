#include "svdls/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <regex>
#include <sstream>

namespace svdls::io {

static_assert(std::endian::native == std::endian::little, "NPY reader assumes a little-endian host");

namespace {

constexpr char kMagic[] = "\x93NUMPY";
constexpr std::size_t kMagicLen = 6;
constexpr std::size_t kPreludeLen = 10; // magic + version + u16 header length

} // namespace

std::string to_string(NpyField f) {
    switch (f) {
    case NpyField::open:
        return "open";
    case NpyField::magic:
        return "magic";
    case NpyField::version:
        return "version";
    case NpyField::header:
        return "header";
    case NpyField::dtype:
        return "dtype";
    case NpyField::fortran_order:
        return "fortran_order";
    case NpyField::shape:
        return "shape";
    case NpyField::truncated:
        return "truncated";
    case NpyField::non_finite:
        return "non_finite";
    }
    return "unknown";
}

NpyError::NpyError(NpyField field, const std::string &message)
    : IoError("npy " + to_string(field) + ": " + message), field_(field), detail_(message) {}

Matrix parse_npy(const std::string &bytes) {
    if (bytes.size() < kMagicLen || bytes.compare(0, kMagicLen, kMagic, kMagicLen) != 0) {
        throw NpyError(NpyField::magic, "missing \\x93NUMPY magic string");
    }
    if (bytes.size() < kPreludeLen) {
        throw NpyError(NpyField::truncated, "file ends inside the preamble");
    }
    const auto major = static_cast<unsigned char>(bytes[6]);
    const auto minor = static_cast<unsigned char>(bytes[7]);
    if (major != 1 || minor != 0) {
        throw NpyError(NpyField::version,
                       "unsupported format version " + std::to_string(major) + "." + std::to_string(minor) +
                           " (only 1.0)");
    }
    const std::size_t header_len =
        static_cast<unsigned char>(bytes[8]) | (static_cast<std::size_t>(static_cast<unsigned char>(bytes[9])) << 8);
    if (bytes.size() < kPreludeLen + header_len) {
        throw NpyError(NpyField::truncated, "file ends inside the header");
    }
    const std::string header = bytes.substr(kPreludeLen, header_len);
    if (header.empty() || header.front() != '{' || header.find('}') == std::string::npos) {
        throw NpyError(NpyField::header, "header is not a dict literal");
    }

    static const std::regex descr_re(R"('descr'\s*:\s*'([^']*)')");
    static const std::regex fortran_re(R"('fortran_order'\s*:\s*(True|False))");
    static const std::regex shape_re(R"('shape'\s*:\s*\(([^)]*)\))");
    std::smatch match;

    if (!std::regex_search(header, match, descr_re)) {
        throw NpyError(NpyField::header, "header has no 'descr' entry");
    }
    const std::string descr = match[1];
    std::size_t item = 0;
    if (descr == "<f8") {
        item = 8;
    } else if (descr == "<f4") {
        item = 4;
    } else {
        throw NpyError(NpyField::dtype, "unsupported descr '" + descr + "' (expected '<f4' or '<f8')");
    }

    if (!std::regex_search(header, match, fortran_re)) {
        throw NpyError(NpyField::header, "header has no 'fortran_order' entry");
    }
    if (match[1] == "True") {
        throw NpyError(NpyField::fortran_order, "Fortran-ordered arrays are not supported");
    }

    if (!std::regex_search(header, match, shape_re)) {
        throw NpyError(NpyField::header, "header has no 'shape' entry");
    }
    std::vector<std::size_t> dims;
    {
        std::stringstream ss(match[1].str());
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            const auto first = tok.find_first_not_of(" \t");
            if (first == std::string::npos) {
                continue;
            }
            const auto last = tok.find_last_not_of(" \t");
            const std::string digits = tok.substr(first, last - first + 1);
            if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
                throw NpyError(NpyField::shape, "malformed dimension '" + digits + "'");
            }
            dims.push_back(std::stoull(digits));
        }
    }
    if (dims.size() != 2) {
        throw NpyError(NpyField::shape, "expected a 2-D array, got " + std::to_string(dims.size()) + " dimensions");
    }

    const std::size_t rows = dims[0];
    const std::size_t cols = dims[1];
    const std::size_t payload = rows * cols * item;
    const std::size_t offset = kPreludeLen + header_len;
    if (bytes.size() - offset < payload) {
        throw NpyError(NpyField::truncated, "expected " + std::to_string(payload) + " data bytes, found " +
                                                std::to_string(bytes.size() - offset));
    }
    if (bytes.size() - offset > payload) {
        throw NpyError(NpyField::shape, "file holds more data than shape (" + std::to_string(rows) + ", " +
                                            std::to_string(cols) + ") describes");
    }

    Matrix m(rows, cols);
    auto out = m.data();
    const char *src = bytes.data() + offset;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (item == 8) {
            std::memcpy(&out[i], src + 8 * i, 8);
        } else {
            float f = 0.0F;
            std::memcpy(&f, src + 4 * i, 4);
            out[i] = static_cast<double>(f);
        }
        if (!std::isfinite(out[i])) {
            throw NpyError(NpyField::non_finite, "non-finite value at flat index " + std::to_string(i));
        }
    }
    return m;
}

Matrix read_npy(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw NpyError(NpyField::open, "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_npy(buf.str());
    } catch (const NpyError &e) {
        throw NpyError(e.field(), path.string() + ": " + e.detail());
    }
}

std::string encode_npy(const Matrix &m, NpyDtype dtype) {
    std::string dict = std::string("{'descr': '") + (dtype == NpyDtype::f8 ? "<f8" : "<f4") +
                       "', 'fortran_order': False, 'shape': (" + std::to_string(m.rows()) + ", " +
                       std::to_string(m.cols()) + "), }";
    // Pad with spaces so the data starts on a 64-byte boundary; the header
    // ends with a newline.
    const std::size_t unpadded = kPreludeLen + dict.size() + 1;
    const std::size_t padded = (unpadded + 63) / 64 * 64;
    dict.append(padded - unpadded, ' ');
    dict.push_back('\n');

    std::string out(kMagic, kMagicLen);
    out.push_back('\x01');
    out.push_back('\x00');
    out.push_back(static_cast<char>(dict.size() & 0xff));
    out.push_back(static_cast<char>((dict.size() >> 8) & 0xff));
    out += dict;

    const auto values = m.data();
    const std::size_t item = dtype == NpyDtype::f8 ? 8 : 4;
    const std::size_t base = out.size();
    out.resize(base + values.size() * item);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (dtype == NpyDtype::f8) {
            std::memcpy(out.data() + base + 8 * i, &values[i], 8);
        } else {
            const auto f = static_cast<float>(values[i]);
            std::memcpy(out.data() + base + 4 * i, &f, 4);
        }
    }
    return out;
}

void write_npy(const Matrix &m, const std::filesystem::path &path, NpyDtype dtype) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    const std::string bytes = encode_npy(m, dtype);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

} // namespace svdls::io
