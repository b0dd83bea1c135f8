#include <doctest.h>

#include <cmath>

#include "plumeseg/errors.hpp"
#include "plumeseg/radiometry.hpp"
#include "plumeseg/synth.hpp"
#include "test_support.hpp"

using namespace plumeseg;

namespace {

SceneSpec single_region_scene(double emissivity_value, double temperature_k) {
    SceneSpec s;
    s.frames = 2;
    s.height = 4;
    s.width = 5;
    s.bands = 6;
    s.noise_std = 0.0;
    s.plume.enabled = false;
    RegionSpec region;
    region.polygon = rect_polygon(0, 0, s.width, s.height);
    region.temperature_k = temperature_k;
    region.emissivity = flat_spectrum(s.bands, emissivity_value);
    s.regions = {region};
    return s;
}

}  // namespace

TEST_CASE("pure blackbody scene matches planck exactly") {
    SceneSpec spec = single_region_scene(1.0, 305.0);
    const SynthResult res = generate(spec);
    for (int b = 0; b < spec.bands; ++b) {
        const double expected = planck_excitance(
            wavenumber_from_nm(res.cube.wavelengths_nm[b]), 305.0);
        for (int t = 0; t < spec.frames; ++t) {
            for (int h = 0; h < spec.height; ++h) {
                for (int w = 0; w < spec.width; ++w) {
                    CHECK(res.cube.at(t, h, w, b) == expected);
                }
            }
        }
    }
}

TEST_CASE("generation is deterministic in the seed") {
    SceneSpec spec = default_scene();
    spec.frames = 6;
    const SynthResult a = generate(spec);
    const SynthResult b = generate(spec);
    CHECK(a.cube.data == b.cube.data);
    CHECK(a.truth.masks == b.truth.masks);

    SceneSpec other = spec;
    other.seed = spec.seed + 1;
    const SynthResult c = generate(other);
    CHECK(a.cube.data != c.cube.data);
}

TEST_CASE("unit concentration pixel carries the target signature exactly") {
    SceneSpec spec = single_region_scene(0.7, 300.0);
    spec.plume.enabled = true;
    spec.plume.release_frame = 0;
    spec.plume.center_x = 2.5;  // pixel (1,2) center
    spec.plume.center_y = 1.5;
    spec.plume.sigma0 = 1.0;
    spec.plume.amplitude = 1.0;
    spec.plume.decay_rate = 0.0;
    spec.plume.emissivity = notch_spectrum(spec.bands, 0.8, 0.3, 0.5, 0.2);
    const SynthResult res = generate(spec);
    for (int b = 0; b < spec.bands; ++b) {
        const double excitance = planck_excitance(
            wavenumber_from_nm(res.cube.wavelengths_nm[b]), 300.0);
        CHECK(res.cube.at(0, 1, 2, b) == spec.plume.emissivity[b] * excitance);
    }
}

TEST_CASE("per-band means stay within the sampling tolerance of the "
          "noise-free model") {
    SceneSpec noisy = default_scene();
    SceneSpec clean = noisy;
    clean.noise_std = 0.0;
    const SynthResult a = generate(noisy);
    const SynthResult b = generate(clean);

    const std::size_t pixels =
        static_cast<std::size_t>(noisy.frames) * noisy.height * noisy.width;
    const double tol =
        3.0 * noisy.noise_std / std::sqrt(noisy.height * noisy.width);
    for (int band = 0; band < noisy.bands; ++band) {
        double mean_noisy = 0.0, mean_clean = 0.0;
        for (std::size_t p = 0; p < pixels; ++p) {
            mean_noisy += a.cube.data[p * noisy.bands + band];
            mean_clean += b.cube.data[p * noisy.bands + band];
        }
        mean_noisy /= static_cast<double>(pixels);
        mean_clean /= static_cast<double>(pixels);
        CHECK(std::abs(mean_noisy - mean_clean) < tol);
    }
}

TEST_CASE("ground truth masks start at the release frame") {
    SceneSpec spec = default_scene();
    const SynthResult res = generate(spec);
    for (int t = 0; t < spec.plume.release_frame; ++t) {
        CHECK(res.truth.frame_plume_pixels(t) == 0);
    }
    CHECK(res.truth.frame_plume_pixels(spec.plume.release_frame) > 0);
}

TEST_CASE("noise-free emissivity recovery to machine precision") {
    SceneSpec spec = single_region_scene(0.63, 294.0);
    const SynthResult res = generate(spec);
    for (int b = 0; b < spec.bands; ++b) {
        const double excitance = planck_excitance(
            wavenumber_from_nm(res.cube.wavelengths_nm[b]), 294.0);
        const double eps = res.cube.at(1, 2, 3, b) / excitance;
        CHECK(eps == doctest::Approx(0.63).epsilon(1e-13));
    }
}

TEST_CASE("scene validation rejects bad specs") {
    SUBCASE("degenerate dims") {
        SceneSpec s = single_region_scene(0.5, 300.0);
        s.frames = 0;
        CHECK_THROWS_AS(generate(s), DomainError);
    }
    SUBCASE("release after the last frame") {
        SceneSpec s = single_region_scene(0.5, 300.0);
        s.plume.enabled = true;
        s.plume.release_frame = s.frames;
        s.plume.emissivity = flat_spectrum(s.bands, 0.5);
        CHECK_THROWS_AS(generate(s), DomainError);
    }
    SUBCASE("regions must cover every pixel") {
        SceneSpec s = single_region_scene(0.5, 300.0);
        s.regions[0].polygon = rect_polygon(0, 0, s.width - 1, s.height);
        CHECK_THROWS_AS(generate(s), DomainError);
    }
    SUBCASE("regions must not overlap") {
        SceneSpec s = single_region_scene(0.5, 300.0);
        RegionSpec dup = s.regions[0];
        s.regions.push_back(dup);
        CHECK_THROWS_AS(generate(s), DomainError);
    }
    SUBCASE("emissivity outside [0,1] rejected") {
        SceneSpec s = single_region_scene(1.2, 300.0);
        CHECK_THROWS_AS(generate(s), DomainError);
    }
}

TEST_CASE("scene config round-trips through text") {
    SceneSpec spec = default_scene();
    spec.frames = 5;
    const std::string text = scene_config_text(spec);
    const SceneSpec parsed = parse_scene_config(text);
    const SynthResult a = generate(spec);
    const SynthResult b = generate(parsed);
    CHECK(a.cube.data == b.cube.data);
    CHECK(a.truth.masks == b.truth.masks);
}

TEST_CASE("unknown scene config keys are rejected") {
    SceneSpec spec = default_scene();
    const std::string text = scene_config_text(spec) + "bogus_key = 1\n";
    CHECK_THROWS_AS(parse_scene_config(text), DomainError);
}
