#ifndef PLUMESEG_SYNTH_HPP
#define PLUMESEG_SYNTH_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "plumeseg/types.hpp"

namespace plumeseg {

/// Spectrum generators used for region and plume emissivities.
std::vector<double> flat_spectrum(int bands, double value);
std::vector<double> ramp_spectrum(int bands, double first, double last);
/// Gaussian absorption dip: base - depth * exp(-((f - center)/width)^2)
/// with f = b/(bands-1) in [0,1].
std::vector<double> notch_spectrum(int bands, double base, double depth,
                                   double center, double width);

/// Scene region: polygon in pixel coordinates (x right, y down; containment
/// tested at pixel centers), one temperature, one emissivity spectrum.
struct RegionSpec {
    std::vector<std::array<double, 2>> polygon;
    double temperature_k = 300.0;
    std::vector<double> emissivity;
};

/// Axis-aligned rectangle helper, half-open [x0,x1) x [y0,y1).
std::vector<std::array<double, 2>> rect_polygon(double x0, double y0, double x1,
                                                double y1);

/// Dispersing Gaussian puff released at `release_frame`:
///   c(t, p) = amplitude * exp(-decay_rate * dt) * exp(-r^2 / (2 sigma(dt)^2))
/// with dt = t - release_frame, sigma(dt) = sigma0 + sigma_growth * dt, r the
/// distance from p to center + velocity * dt. Concentration is clamped to
/// [0, 1] and mixes target into background emissivity linearly.
struct PlumeSpec {
    bool enabled = true;
    int release_frame = 0;
    double center_x = 0.0, center_y = 0.0;
    double velocity_x = 0.0, velocity_y = 0.0;
    double sigma0 = 2.0;
    double sigma_growth = 0.0;
    double decay_rate = 0.0;
    double amplitude = 1.0;
    std::vector<double> emissivity;  // target signature s_t
};

struct SceneSpec {
    int frames = 0, height = 0, width = 0, bands = 0;
    double wavelength_start_nm = 7830.0;
    double wavelength_step_nm = 30.0;
    std::vector<RegionSpec> regions;
    PlumeSpec plume;
    double noise_std = 0.0;       // per-band additive Gaussian, radiance units
    double truth_cutoff = 0.1;    // concentration above this is "plume"
    std::uint64_t seed = 0;

    void validate() const;  // throws DomainError; checks the partition too
};

/// Per-frame plume masks plus everything a detector benchmark needs.
struct GroundTruth {
    int frames = 0, height = 0, width = 0;
    int release_frame = 0;
    double cutoff = 0.1;
    std::vector<std::uint8_t> masks;  // frames*height*width
    std::vector<double> target_signature;

    std::span<const std::uint8_t> frame_mask(int t) const {
        const std::size_t n = static_cast<std::size_t>(height) * width;
        return {masks.data() + static_cast<std::size_t>(t) * n, n};
    }
    std::size_t frame_plume_pixels(int t) const;
};

struct SynthResult {
    HyperCube cube;  // kind == Radiance
    GroundTruth truth;
};

/// Pure function of the spec; per-sample counter-based noise keeps the
/// output independent of evaluation order.
SynthResult generate(const SceneSpec& spec);

/// The desk-scale scene (40 frames, 32x64, 32 bands, three regions, one
/// plume release at frame 8) used throughout the tests and as the CLI
/// default.
SceneSpec default_scene();

/// Flat key=value scene config (documented in the README).
SceneSpec parse_scene_config(const std::string& text);
std::string scene_config_text(const SceneSpec& spec);

}  // namespace plumeseg

#endif
