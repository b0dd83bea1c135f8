#ifndef PLUMESEG_TYPES_HPP
#define PLUMESEG_TYPES_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace plumeseg {

/// Physical interpretation of the samples stored in a HyperCube.
enum class CubeKind : std::uint8_t { Radiance = 0, Emissivity = 1 };

/// A T x H x W x B stack of spectral samples with per-band wavelengths.
/// Data is stored row-major in (t, h, w, b) order. Immutable by convention
/// once built; every operation returns a new cube.
struct HyperCube {
    int frames = 0;
    int height = 0;
    int width = 0;
    int bands = 0;
    CubeKind kind = CubeKind::Radiance;
    std::vector<double> wavelengths_nm;  // size bands, strictly ascending
    std::vector<double> data;            // size frames*height*width*bands

    std::size_t sample_count() const {
        return static_cast<std::size_t>(frames) * height * width * bands;
    }
    std::size_t pixel_index(int t, int h, int w) const {
        return (static_cast<std::size_t>(t) * height + h) * width + w;
    }
    double& at(int t, int h, int w, int b) {
        return data[pixel_index(t, h, w) * bands + b];
    }
    double at(int t, int h, int w, int b) const {
        return data[pixel_index(t, h, w) * bands + b];
    }
    std::span<const double> spectrum(int t, int h, int w) const {
        return {data.data() + pixel_index(t, h, w) * bands,
                static_cast<std::size_t>(bands)};
    }
    std::span<double> spectrum(int t, int h, int w) {
        return {data.data() + pixel_index(t, h, w) * bands,
                static_cast<std::size_t>(bands)};
    }

    /// Throws DomainError when dimensions, wavelength ordering, data length
    /// or finiteness are violated.
    void validate() const;
};

/// Returns the sub-cube covering frames [t_begin, t_end).
HyperCube slice_frames(const HyperCube& cube, int t_begin, int t_end);

/// T x H x W x 3 real-valued frames in [0, 1], ready for PPM emission.
struct FalseColorVideo {
    int frames = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data;  // (t, h, w, c) row-major, c in {0,1,2}

    std::size_t pixel_index(int t, int h, int w) const {
        return (static_cast<std::size_t>(t) * height + h) * width + w;
    }
    double& at(int t, int h, int w, int c) {
        return data[pixel_index(t, h, w) * 3 + c];
    }
    double at(int t, int h, int w, int c) const {
        return data[pixel_index(t, h, w) * 3 + c];
    }
    void validate() const;
};

/// PCA projections of a video: k score channels per pixel, unbounded range.
struct ScoreVideo {
    int frames = 0;
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<double> data;  // (t, h, w, c) row-major

    std::size_t pixel_index(int t, int h, int w) const {
        return (static_cast<std::size_t>(t) * height + h) * width + w;
    }
    double at(int t, int h, int w, int c) const {
        return data[pixel_index(t, h, w) * channels + c];
    }
    double& at(int t, int h, int w, int c) {
        return data[pixel_index(t, h, w) * channels + c];
    }
};

/// Per-pixel integer cluster assignment, labels in [0, num_clusters).
struct Labeling {
    int height = 0;
    int width = 0;
    int num_clusters = 1;
    std::vector<int> labels;  // size height*width, row-major

    void validate() const;
};

/// Binary phase field; after thresholding u holds exactly -1 or +1.
struct PhaseField {
    int height = 0;
    int width = 0;
    std::vector<double> u;  // size height*width, row-major
};

/// Per-pixel detector statistic plus the mask obtained at `threshold`.
struct DetectionMap {
    int height = 0;
    int width = 0;
    double threshold = 0.0;
    std::vector<double> statistic;  // size height*width
    std::vector<std::uint8_t> mask;  // 1 where statistic >= threshold
};

/// Jaccard index |A cap B| / |A cup B| of two binary masks. Two empty
/// masks count as identical (index 1).
double jaccard(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

}  // namespace plumeseg

#endif
