#pragma once

// 8-bit PGM (P2/P5) and the lossless FIMG text format.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "motionblur/error.hpp"
#include "motionblur/image.hpp"

namespace motionblur {

class PgmError : public IoError {
public:
    enum class Kind { MalformedHeader, UnsupportedMaxval, IoFailure };

    PgmError(Kind kind, const std::string& what) : IoError(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

enum class PgmEncoding { Binary, Ascii };

/// How values outside [0, 1] are brought into the 8-bit range on save.
enum class PgmScaling { Clamp, Rescale };

namespace detail {

inline void skip_space_and_comments(std::istream& in) {
    for (;;) {
        const int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (c != EOF && std::isspace(c)) {
            in.get();
        } else {
            return;
        }
    }
}

inline long read_header_int(std::istream& in, const char* field) {
    skip_space_and_comments(in);
    long v = 0;
    if (!(in >> v))
        throw PgmError(PgmError::Kind::MalformedHeader, std::string("PGM header: cannot read ") + field);
    return v;
}

}  // namespace detail

/// Parses a PGM stream; grey levels map to v / maxval in [0, 1].
inline CartesianImage read_pgm(std::istream& in) {
    char magic[2] = {0, 0};
    if (!in.read(magic, 2) || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5'))
        throw PgmError(PgmError::Kind::MalformedHeader, "PGM header: magic must be P2 or P5");
    const bool binary = magic[1] == '5';
    const long width = detail::read_header_int(in, "width");
    const long height = detail::read_header_int(in, "height");
    const long maxval = detail::read_header_int(in, "maxval");
    if (width < 1 || height < 1 || width > (1 << 20) || height > (1 << 20))
        throw PgmError(PgmError::Kind::MalformedHeader, "PGM header: invalid dimensions");
    if (maxval < 1 || maxval > 255)
        throw PgmError(PgmError::Kind::UnsupportedMaxval,
                       "PGM maxval " + std::to_string(maxval) + " unsupported (need 1..255)");

    const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<double> values(count);
    const double scale = 1.0 / static_cast<double>(maxval);
    if (binary) {
        // exactly one whitespace byte separates maxval from the raster
        if (!std::isspace(in.get()))
            throw PgmError(PgmError::Kind::MalformedHeader, "PGM header: missing separator before raster");
        std::vector<unsigned char> raw(count);
        if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count)))
            throw PgmError(PgmError::Kind::IoFailure, "PGM raster truncated");
        for (std::size_t k = 0; k < count; ++k) values[k] = raw[k] * scale;
    } else {
        for (std::size_t k = 0; k < count; ++k) {
            detail::skip_space_and_comments(in);
            long v = 0;
            if (!(in >> v)) throw PgmError(PgmError::Kind::IoFailure, "PGM raster truncated");
            if (v < 0 || v > maxval) throw PgmError(PgmError::Kind::MalformedHeader, "PGM sample exceeds maxval");
            values[k] = v * scale;
        }
    }
    return CartesianImage(static_cast<int>(width), static_cast<int>(height), 1.0, std::move(values));
}

inline CartesianImage load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PgmError(PgmError::Kind::IoFailure, "cannot open " + path.string());
    return read_pgm(in);
}

/// Quantises to 8 bits with round-half-up of v * 255.
inline void write_pgm(const CartesianImage& img, std::ostream& out, PgmEncoding encoding = PgmEncoding::Binary,
                      PgmScaling scaling = PgmScaling::Clamp) {
    double lo = 0.0, hi = 1.0;
    if (scaling == PgmScaling::Rescale) {
        lo = img.min();
        hi = img.max();
        if (hi <= lo) hi = lo + 1.0;
    }
    std::vector<unsigned char> raw(img.size());
    const auto vals = img.values();
    for (std::size_t k = 0; k < raw.size(); ++k) {
        const double v = (vals[k] - lo) / (hi - lo);
        const double q = std::floor(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5);
        raw[k] = static_cast<unsigned char>(q);
    }
    out << (encoding == PgmEncoding::Binary ? "P5" : "P2") << '\n'
        << img.width() << ' ' << img.height() << "\n255\n";
    if (encoding == PgmEncoding::Binary) {
        out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    } else {
        for (int i = 0; i < img.height(); ++i) {
            for (int j = 0; j < img.width(); ++j)
                out << (j ? " " : "") << static_cast<int>(raw[static_cast<std::size_t>(i) * img.width() + j]);
            out << '\n';
        }
    }
    if (!out) throw PgmError(PgmError::Kind::IoFailure, "PGM write failed");
}

inline void save_pgm(const CartesianImage& img, const std::filesystem::path& path,
                     PgmEncoding encoding = PgmEncoding::Binary, PgmScaling scaling = PgmScaling::Clamp) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PgmError(PgmError::Kind::IoFailure, "cannot open " + path.string() + " for writing");
    write_pgm(img, out, encoding, scaling);
}

/// FIMG: a `FIMG width height pitch` line, then width*height decimals in row-major order.
inline void write_fimg(const CartesianImage& img, std::ostream& out) {
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << "FIMG " << img.width() << ' ' << img.height() << ' ' << img.pitch() << '\n';
    for (int i = 0; i < img.height(); ++i) {
        for (int j = 0; j < img.width(); ++j) out << (j ? " " : "") << img(i, j);
        out << '\n';
    }
    if (!out) throw IoError("FIMG write failed");
}

inline CartesianImage read_fimg(std::istream& in) {
    std::string magic;
    int width = 0, height = 0;
    double pitch = 0.0;
    if (!(in >> magic >> width >> height >> pitch) || magic != "FIMG")
        throw IoError("FIMG header malformed");
    if (width < 1 || height < 1 || !(pitch > 0.0)) throw IoError("FIMG header has invalid grid");
    std::vector<double> values(static_cast<std::size_t>(width) * height);
    for (double& v : values)
        if (!(in >> v)) throw IoError("FIMG data truncated");
    return CartesianImage(width, height, pitch, std::move(values));
}

inline void save_fimg(const CartesianImage& img, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_fimg(img, out);
}

inline CartesianImage load_fimg(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_fimg(in);
}

/// Dispatches on extension: `.pgm` is PGM, anything else FIMG.
inline CartesianImage load_image(const std::filesystem::path& path) {
    return path.extension() == ".pgm" ? load_pgm(path) : load_fimg(path);
}

inline void save_image(const CartesianImage& img, const std::filesystem::path& path,
                       PgmScaling scaling = PgmScaling::Clamp) {
    if (path.extension() == ".pgm")
        save_pgm(img, path, PgmEncoding::Binary, scaling);
    else
        save_fimg(img, path);
}

}  // namespace motionblur
