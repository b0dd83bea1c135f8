#ifndef PLUMESEG_IO_HPP
#define PLUMESEG_IO_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "plumeseg/types.hpp"

namespace plumeseg {

/// HSC1 container: magic "HSC1" | u32-LE T,H,W,B | B x f64-LE wavelengths
/// (nm) | u8 kind (0 radiance, 1 emissivity) | T*H*W*B x f64-LE samples in
/// (t,h,w,b) row-major order. Lossless: read_cube(write_cube(c)) == c
/// bit-exactly.
HyperCube read_cube(const std::filesystem::path& path);
void write_cube(const HyperCube& cube, const std::filesystem::path& path);

/// Exact on-disk size in bytes of a cube with the given dimensions.
std::size_t hsc1_file_size(int frames, int height, int width, int bands);

/// Writes binary PGM (channels == 1) or PPM (channels == 3), 8-bit,
/// maxval 255. Quantization is round-half-away-from-zero: byte(v) =
/// floor(255 v + 0.5). Values outside [0,1] raise DomainError naming the
/// offending pixel.
void emit_image(std::span<const double> data, int height, int width,
                int channels, const std::filesystem::path& path);

/// One false-color frame as PPM.
void emit_frame(const FalseColorVideo& video, int t,
                const std::filesystem::path& path);

/// Binary mask as PGM with 0/255 payload.
void emit_mask(std::span<const std::uint8_t> mask, int height, int width,
               const std::filesystem::path& path);

/// Decoded 8-bit Netpbm image.
struct ImageU8 {
    int height = 0;
    int width = 0;
    int channels = 0;  // 1 (PGM) or 3 (PPM)
    std::vector<std::uint8_t> pixels;
};

/// Reads binary P5/P6 with maxval 255.
ImageU8 read_netpbm(const std::filesystem::path& path);

/// One CSV row per image row, comma-separated labels, trailing newline.
void emit_labeling_csv(const Labeling& labeling,
                       const std::filesystem::path& path);

/// Whole-file helpers used by CLI subcommands.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Renders `index` into a printf-style pattern that must contain exactly
/// one %d conversion (width/zero-pad flags allowed), e.g. "mask_%04d.pgm".
std::string format_indexed_path(const std::string& pattern, int index);

}  // namespace plumeseg

#endif
