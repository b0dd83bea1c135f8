#include <doctest.h>

#include <cmath>

#include "plumeseg/errors.hpp"
#include "plumeseg/radiometry.hpp"
#include "plumeseg/synth.hpp"
#include "test_support.hpp"

using namespace plumeseg;

TEST_CASE("planck excitance") {
    SUBCASE("strictly increasing in temperature") {
        CHECK(planck_excitance(1.0e5, 310.0) > planck_excitance(1.0e5, 300.0));
        double prev = 0.0;
        for (double t = 200.0; t <= 400.0; t += 10.0) {
            const double b = planck_excitance(1.2e5, t);
            CHECK(b > prev);
            prev = b;
        }
    }
    SUBCASE("matches a high-precision oracle to 12 digits") {
        for (double nu : {8.0e4, 1.0e5, 1.2e5, 1.4e5}) {
            for (double t : {250.0, 300.0, 350.0}) {
                const double ours = planck_excitance(nu, t);
                const double ref = testsup::planck_oracle(nu, t);
                CHECK(std::abs(ours / ref - 1.0) < 1e-12);
            }
        }
    }
    SUBCASE("deep Wien tail saturates to zero") {
        CHECK(planck_excitance(1.0e8, 1.0) == 0.0);
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(planck_excitance(0.0, 300.0), DomainError);
        CHECK_THROWS_AS(planck_excitance(1e5, 0.0), DomainError);
        CHECK_THROWS_AS(planck_excitance(-1e5, 300.0), DomainError);
        CHECK_THROWS_AS(planck_excitance(1e5, -5.0), DomainError);
    }
}

namespace {

SceneSpec flat_scene(double eps, double temp, int frames = 2) {
    SceneSpec s;
    s.frames = frames;
    s.height = 4;
    s.width = 5;
    s.bands = 8;
    s.noise_std = 0.0;
    s.plume.enabled = false;
    RegionSpec region;
    region.polygon = rect_polygon(0, 0, s.width, s.height);
    region.temperature_k = temp;
    region.emissivity = flat_spectrum(s.bands, eps);
    s.regions = {region};
    return s;
}

}  // namespace

TEST_CASE("radiance to emissivity") {
    SUBCASE("matched temperature recovers the emissivity to machine precision") {
        const SynthResult synth = generate(flat_scene(0.7, 300.0));
        const EmissivityResult res = radiance_to_emissivity(synth.cube, 300.0);
        CHECK(res.outlier_count == 0);
        for (double v : res.cube.data) {
            CHECK(std::abs(v / 0.7 - 1.0) < 1e-12);
        }
        CHECK(res.cube.kind == CubeKind::Emissivity);
    }
    SUBCASE("mismatched temperature flags the hottest region") {
        // three-temperature scene; conversion assumes a colder scene
        SceneSpec spec = default_scene();
        spec.noise_std = 0.0;
        const SynthResult synth = generate(spec);
        const EmissivityResult res = radiance_to_emissivity(synth.cube, 285.0);

        // oracle: count out-of-range pixels directly
        std::size_t expected = 0;
        const std::size_t pixels = res.outlier_mask.size();
        for (std::size_t p = 0; p < pixels; ++p) {
            bool out = false;
            for (int b = 0; b < res.cube.bands; ++b) {
                const double v = res.cube.data[p * res.cube.bands + b];
                if (!(v >= 0.0 && v <= 1.0)) out = true;
            }
            if (out) ++expected;
        }
        CHECK(expected > 0);
        CHECK(res.outlier_count == expected);

        // hottest region (desert rows) carries the flags
        bool desert_flagged = false;
        for (int t = 0; t < res.cube.frames && !desert_flagged; ++t) {
            for (int h = 20; h < res.cube.height && !desert_flagged; ++h) {
                for (int w = 0; w < res.cube.width; ++w) {
                    if (res.is_outlier(t, h, w)) {
                        desert_flagged = true;
                        break;
                    }
                }
            }
        }
        CHECK(desert_flagged);
    }
    SUBCASE("zero radiance maps to zero emissivity, not an outlier") {
        SceneSpec spec = flat_scene(0.0, 300.0);
        const SynthResult synth = generate(spec);
        const EmissivityResult res = radiance_to_emissivity(synth.cube, 300.0);
        CHECK(res.outlier_count == 0);
        for (double v : res.cube.data) CHECK(v == 0.0);
    }
}

TEST_CASE("3x3 spectral median filter") {
    SUBCASE("no outliers means identity") {
        const SynthResult synth = generate(flat_scene(0.5, 300.0));
        const EmissivityResult res = radiance_to_emissivity(synth.cube, 300.0);
        const HyperCube filtered = spectral_median_filter_3x3(res);
        CHECK(filtered.data == res.cube.data);
    }
    SUBCASE("flagged pixel among identical neighbors takes their spectrum") {
        SceneSpec spec = flat_scene(0.5, 300.0, 1);
        const SynthResult synth = generate(spec);
        EmissivityResult res = radiance_to_emissivity(synth.cube, 300.0);
        // poison an interior pixel and flag it
        const std::size_t pix = res.cube.pixel_index(0, 2, 2);
        for (int b = 0; b < res.cube.bands; ++b) {
            res.cube.data[pix * res.cube.bands + b] = 1.7;
        }
        res.outlier_mask[pix] = 1;
        res.outlier_count = 1;
        const HyperCube filtered = spectral_median_filter_3x3(res);
        for (int b = 0; b < res.cube.bands; ++b) {
            CHECK(filtered.at(0, 2, 2, b) ==
                  doctest::Approx(0.5).epsilon(1e-12));
        }
        // untouched elsewhere
        CHECK(filtered.at(0, 0, 0, 0) == res.cube.at(0, 0, 0, 0));
    }
    SUBCASE("corner outlier equals the brute-force padded median") {
        SceneSpec spec = flat_scene(0.4, 300.0, 1);
        spec.bands = 1;
        spec.regions[0].emissivity = flat_spectrum(1, 0.4);
        SynthResult synth = generate(spec);
        EmissivityResult res = radiance_to_emissivity(synth.cube, 300.0);
        // distinct values around the corner so the median is non-trivial
        const auto vals = testsup::uniform_vector(
            static_cast<std::size_t>(spec.height) * spec.width, 99);
        for (int h = 0; h < spec.height; ++h) {
            for (int w = 0; w < spec.width; ++w) {
                res.cube.at(0, h, w, 0) =
                    vals[static_cast<std::size_t>(h) * spec.width + w];
            }
        }
        res.outlier_mask.assign(res.outlier_mask.size(), 0);
        res.outlier_mask[res.cube.pixel_index(0, 0, 0)] = 1;
        const HyperCube filtered = spectral_median_filter_3x3(res);

        std::vector<double> image(vals);
        const auto oracle = testsup::median_oracle(image, spec.height, spec.width, 1);
        CHECK(filtered.at(0, 0, 0, 0) == oracle[0]);
    }
}

TEST_CASE("9x9 median filter") {
    SUBCASE("constant image unchanged") {
        const std::vector<double> img(16 * 16, 0.3);
        CHECK(median_filter_9x9(img, 16, 16) == img);
    }
    SUBCASE("isolated spike removed") {
        std::vector<double> img(16 * 16, 0.0);
        img[5 * 16 + 7] = 1.0;
        const auto out = median_filter_9x9(img, 16, 16);
        for (double v : out) CHECK(v == 0.0);
    }
    SUBCASE("random binary image matches the brute-force oracle") {
        std::vector<double> img(16 * 16);
        plumeseg::SplitMix64 rng(42);
        for (auto& v : img) v = (rng.next_u01() < 0.5) ? 0.0 : 1.0;
        CHECK(median_filter_9x9(img, 16, 16) ==
              testsup::median_oracle(img, 16, 16, 4));
    }
    SUBCASE("output stays inside the input range and is idempotent on "
            "constants") {
        const auto img = testsup::uniform_vector(12 * 10, 5, 0.2, 0.9);
        const auto out = median_filter(img, 12, 10, 2);
        const double lo = *std::min_element(img.begin(), img.end());
        const double hi = *std::max_element(img.begin(), img.end());
        for (double v : out) {
            CHECK(v >= lo);
            CHECK(v <= hi);
        }
    }
}
