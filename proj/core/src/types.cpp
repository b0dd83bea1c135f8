#include "plumeseg/types.hpp"

#include <cmath>
#include <string>

#include "plumeseg/errors.hpp"

namespace plumeseg {

void HyperCube::validate() const {
    if (frames <= 0 || height <= 0 || width <= 0 || bands <= 0) {
        throw DomainError("cube has degenerate dimensions " +
                          std::to_string(frames) + "x" + std::to_string(height) +
                          "x" + std::to_string(width) + "x" + std::to_string(bands));
    }
    if (wavelengths_nm.size() != static_cast<std::size_t>(bands)) {
        throw DomainError("wavelength table has " +
                          std::to_string(wavelengths_nm.size()) + " entries, expected " +
                          std::to_string(bands));
    }
    for (int b = 0; b + 1 < bands; ++b) {
        if (!(wavelengths_nm[b] < wavelengths_nm[b + 1])) {
            throw DomainError("wavelengths not strictly ascending at band " +
                              std::to_string(b + 1));
        }
    }
    if (data.size() != sample_count()) {
        throw DomainError("cube data has " + std::to_string(data.size()) +
                          " samples, expected " + std::to_string(sample_count()));
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!std::isfinite(data[i])) {
            throw DomainError("non-finite sample at flat index " + std::to_string(i));
        }
    }
}

HyperCube slice_frames(const HyperCube& cube, int t_begin, int t_end) {
    if (t_begin < 0 || t_end > cube.frames || t_begin >= t_end) {
        throw DomainError("invalid frame range [" + std::to_string(t_begin) + ", " +
                          std::to_string(t_end) + ") for cube with " +
                          std::to_string(cube.frames) + " frames");
    }
    HyperCube out;
    out.frames = t_end - t_begin;
    out.height = cube.height;
    out.width = cube.width;
    out.bands = cube.bands;
    out.kind = cube.kind;
    out.wavelengths_nm = cube.wavelengths_nm;
    const std::size_t frame_samples =
        static_cast<std::size_t>(cube.height) * cube.width * cube.bands;
    out.data.assign(cube.data.begin() + t_begin * frame_samples,
                    cube.data.begin() + t_end * frame_samples);
    return out;
}

void FalseColorVideo::validate() const {
    if (frames <= 0 || height <= 0 || width <= 0) {
        throw DomainError("false-color video has degenerate dimensions");
    }
    const std::size_t expect = static_cast<std::size_t>(frames) * height * width * 3;
    if (data.size() != expect) {
        throw DomainError("false-color data has " + std::to_string(data.size()) +
                          " values, expected " + std::to_string(expect));
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!(data[i] >= 0.0 && data[i] <= 1.0)) {
            throw DomainError("false-color value out of [0,1] at flat index " +
                              std::to_string(i));
        }
    }
}

void Labeling::validate() const {
    if (height <= 0 || width <= 0 || num_clusters < 1) {
        throw DomainError("labeling has degenerate dimensions");
    }
    if (labels.size() != static_cast<std::size_t>(height) * width) {
        throw DomainError("labeling size mismatch");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= num_clusters) {
            throw DomainError("label " + std::to_string(labels[i]) + " at pixel " +
                              std::to_string(i) + " outside [0, " +
                              std::to_string(num_clusters) + ")");
        }
    }
}

double jaccard(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.size() != b.size()) {
        throw DomainError("jaccard: mask sizes differ");
    }
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool pa = a[i] != 0, pb = b[i] != 0;
        inter += (pa && pb) ? 1 : 0;
        uni += (pa || pb) ? 1 : 0;
    }
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace plumeseg
