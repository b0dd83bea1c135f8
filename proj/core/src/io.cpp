#include "plumeseg/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

#include "plumeseg/errors.hpp"

namespace plumeseg {

namespace {

constexpr char kMagic[4] = {'H', 'S', 'C', '1'};

void put_u32le(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_f64le(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
    }
}

class Cursor {
public:
    Cursor(const std::string& buf) : buf_(buf) {}

    std::size_t offset() const { return pos_; }

    void need(std::size_t n, const char* what) const {
        if (pos_ + n > buf_.size()) {
            throw ParseError(std::string("truncated payload while reading ") + what,
                             pos_);
        }
    }
    std::uint32_t u32le(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(
                     static_cast<unsigned char>(buf_[pos_ + i]))
                 << (8 * i);
        }
        pos_ += 4;
        return v;
    }
    double f64le(const char* what) {
        need(8, what);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) {
            bits |= static_cast<std::uint64_t>(
                        static_cast<unsigned char>(buf_[pos_ + i]))
                    << (8 * i);
        }
        pos_ += 8;
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }
    std::uint8_t u8(const char* what) {
        need(1, what);
        return static_cast<std::uint8_t>(buf_[pos_++]);
    }

private:
    const std::string& buf_;
    std::size_t pos_ = 0;
};

std::string slurp_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string() + " for reading");
    }
    std::string buf((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("read failure on " + path.string());
    }
    return buf;
}

void dump_binary(const std::filesystem::path& path, const std::string& buf) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    out.flush();
    if (!out) {
        throw IoError("write failure on " + path.string());
    }
}

}  // namespace

std::size_t hsc1_file_size(int frames, int height, int width, int bands) {
    return 4 + 16 + static_cast<std::size_t>(bands) * 8 + 1 +
           static_cast<std::size_t>(frames) * height * width * bands * 8;
}

HyperCube read_cube(const std::filesystem::path& path) {
    const std::string buf = slurp_binary(path);
    Cursor c(buf);

    c.need(4, "magic");
    if (std::memcmp(buf.data(), kMagic, 4) != 0) {
        throw ParseError("bad magic, expected \"HSC1\"", 0);
    }
    c.u32le("magic");

    HyperCube cube;
    const std::uint32_t t = c.u32le("frame count");
    const std::uint32_t h = c.u32le("height");
    const std::uint32_t w = c.u32le("width");
    const std::uint32_t b = c.u32le("band count");
    if (t == 0 || h == 0 || w == 0 || b == 0) {
        throw ParseError("zero dimension in header", 4);
    }
    constexpr std::uint64_t kMaxSamples = std::uint64_t{1} << 40;
    const std::uint64_t samples = static_cast<std::uint64_t>(t) * h * w * b;
    if (samples > kMaxSamples) {
        throw ParseError("header declares an implausibly large cube", 4);
    }
    cube.frames = static_cast<int>(t);
    cube.height = static_cast<int>(h);
    cube.width = static_cast<int>(w);
    cube.bands = static_cast<int>(b);

    cube.wavelengths_nm.resize(b);
    for (std::uint32_t i = 0; i < b; ++i) {
        const std::size_t at = c.offset();
        cube.wavelengths_nm[i] = c.f64le("wavelength");
        if (i > 0 && !(cube.wavelengths_nm[i - 1] < cube.wavelengths_nm[i])) {
            throw ParseError("wavelengths not strictly ascending", at);
        }
    }

    const std::size_t kind_at = c.offset();
    const std::uint8_t kind = c.u8("kind");
    if (kind > 1) {
        throw ParseError("unknown cube kind " + std::to_string(kind), kind_at);
    }
    cube.kind = static_cast<CubeKind>(kind);

    cube.data.resize(samples);
    for (std::uint64_t i = 0; i < samples; ++i) {
        const std::size_t at = c.offset();
        cube.data[i] = c.f64le("sample data");
        if (!std::isfinite(cube.data[i])) {
            throw ParseError("non-finite sample", at);
        }
    }
    if (c.offset() != buf.size()) {
        throw ParseError("trailing bytes after declared payload", c.offset());
    }
    return cube;
}

void write_cube(const HyperCube& cube, const std::filesystem::path& path) {
    cube.validate();
    std::string buf;
    buf.reserve(hsc1_file_size(cube.frames, cube.height, cube.width, cube.bands));
    buf.append(kMagic, 4);
    put_u32le(buf, static_cast<std::uint32_t>(cube.frames));
    put_u32le(buf, static_cast<std::uint32_t>(cube.height));
    put_u32le(buf, static_cast<std::uint32_t>(cube.width));
    put_u32le(buf, static_cast<std::uint32_t>(cube.bands));
    for (double wl : cube.wavelengths_nm) put_f64le(buf, wl);
    buf.push_back(static_cast<char>(cube.kind));
    for (double v : cube.data) put_f64le(buf, v);
    dump_binary(path, buf);
}

void emit_image(std::span<const double> data, int height, int width,
                int channels, const std::filesystem::path& path) {
    if (channels != 1 && channels != 3) {
        throw DomainError("emit_image supports 1 or 3 channels, got " +
                          std::to_string(channels));
    }
    const std::size_t expect =
        static_cast<std::size_t>(height) * width * channels;
    if (data.size() != expect || height <= 0 || width <= 0) {
        throw DomainError("emit_image dimension mismatch");
    }
    std::string buf;
    buf += (channels == 1) ? "P5" : "P6";
    buf += "\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double v = data[i];
        if (!(v >= 0.0 && v <= 1.0)) {
            throw DomainError("pixel value " + std::to_string(v) +
                              " out of [0,1] at pixel index " +
                              std::to_string(i / channels));
        }
        // round half away from zero; v >= 0 here
        buf.push_back(static_cast<char>(
            static_cast<unsigned char>(std::floor(v * 255.0 + 0.5))));
    }
    dump_binary(path, buf);
}

void emit_frame(const FalseColorVideo& video, int t,
                const std::filesystem::path& path) {
    const std::size_t n = static_cast<std::size_t>(video.height) * video.width * 3;
    std::span<const double> frame{video.data.data() + video.pixel_index(t, 0, 0) * 3,
                                  n};
    emit_image(frame, video.height, video.width, 3, path);
}

void emit_mask(std::span<const std::uint8_t> mask, int height, int width,
               const std::filesystem::path& path) {
    std::vector<double> gray(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) gray[i] = mask[i] ? 1.0 : 0.0;
    emit_image(gray, height, width, 1, path);
}

ImageU8 read_netpbm(const std::filesystem::path& path) {
    const std::string buf = slurp_binary(path);
    std::size_t pos = 0;
    auto skip_space = [&] {
        while (pos < buf.size()) {
            if (std::isspace(static_cast<unsigned char>(buf[pos]))) {
                ++pos;
            } else if (buf[pos] == '#') {
                while (pos < buf.size() && buf[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    };
    auto read_int = [&](const char* what) {
        skip_space();
        std::size_t start = pos;
        long v = 0;
        while (pos < buf.size() && std::isdigit(static_cast<unsigned char>(buf[pos]))) {
            v = v * 10 + (buf[pos] - '0');
            ++pos;
        }
        if (pos == start) {
            throw ParseError(std::string("expected integer for ") + what, pos);
        }
        return v;
    };

    if (buf.size() < 2 || buf[0] != 'P' || (buf[1] != '5' && buf[1] != '6')) {
        throw ParseError("not a binary PGM/PPM file", 0);
    }
    ImageU8 img;
    img.channels = (buf[1] == '5') ? 1 : 3;
    pos = 2;
    img.width = static_cast<int>(read_int("width"));
    img.height = static_cast<int>(read_int("height"));
    const long maxval = read_int("maxval");
    if (maxval != 255) {
        throw ParseError("unsupported maxval " + std::to_string(maxval), pos);
    }
    if (pos >= buf.size() || !std::isspace(static_cast<unsigned char>(buf[pos]))) {
        throw ParseError("missing whitespace before payload", pos);
    }
    ++pos;
    const std::size_t n =
        static_cast<std::size_t>(img.width) * img.height * img.channels;
    if (buf.size() - pos < n) {
        throw ParseError("truncated pixel payload", buf.size());
    }
    img.pixels.assign(buf.begin() + pos, buf.begin() + pos + n);
    return img;
}

void emit_labeling_csv(const Labeling& labeling,
                       const std::filesystem::path& path) {
    labeling.validate();
    std::string buf;
    for (int h = 0; h < labeling.height; ++h) {
        for (int w = 0; w < labeling.width; ++w) {
            if (w > 0) buf += ',';
            buf += std::to_string(labeling.labels[static_cast<std::size_t>(h) *
                                                  labeling.width + w]);
        }
        buf += '\n';
    }
    dump_binary(path, buf);
}

std::string read_text_file(const std::filesystem::path& path) {
    return slurp_binary(path);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    dump_binary(path, text);
}

std::string format_indexed_path(const std::string& pattern, int index) {
    // exactly one %[0-9]*d conversion, no other % allowed
    int conversions = 0;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (pattern[i] != '%') continue;
        std::size_t j = i + 1;
        while (j < pattern.size() && std::isdigit(static_cast<unsigned char>(pattern[j])))
            ++j;
        if (j >= pattern.size() || pattern[j] != 'd') {
            throw DomainError("frame pattern must use a single %d conversion: " +
                              pattern);
        }
        ++conversions;
        i = j;
    }
    if (conversions != 1) {
        throw DomainError("frame pattern must contain exactly one %d: " + pattern);
    }
    char out[4096];
    const int n = std::snprintf(out, sizeof out, pattern.c_str(), index);
    if (n < 0 || n >= static_cast<int>(sizeof out)) {
        throw DomainError("frame pattern expands too long: " + pattern);
    }
    return std::string(out, static_cast<std::size_t>(n));
}

}  // namespace plumeseg
