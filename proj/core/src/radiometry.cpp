#include "plumeseg/radiometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "plumeseg/errors.hpp"

namespace plumeseg {

double planck_excitance(double wavenumber_per_m, double temperature_k,
                        const PlanckParams& params) {
    if (!(wavenumber_per_m > 0.0)) {
        throw DomainError("planck_excitance: wavenumber must be positive, got " +
                          std::to_string(wavenumber_per_m));
    }
    if (!(temperature_k > 0.0)) {
        throw DomainError("planck_excitance: temperature must be positive, got " +
                          std::to_string(temperature_k));
    }
    const double x = params.planck_h * params.light_c * wavenumber_per_m /
                     (params.boltzmann_k * temperature_k);
    if (x > 700.0) {
        return 0.0;  // deep Wien tail; exp would overflow
    }
    const double nu3 = wavenumber_per_m * wavenumber_per_m * wavenumber_per_m;
    return 2.0 * params.planck_h * params.light_c * params.light_c * nu3 /
           std::expm1(x);
}

double wavenumber_from_nm(double wavelength_nm) {
    return 1.0 / (wavelength_nm * 1e-9);
}

EmissivityResult radiance_to_emissivity(const HyperCube& radiance,
                                        double assumed_temperature_k,
                                        const PlanckParams& params) {
    radiance.validate();
    if (!(assumed_temperature_k > 0.0)) {
        throw DomainError("assumed temperature must be positive");
    }

    std::vector<double> band_excitance(radiance.bands);
    for (int b = 0; b < radiance.bands; ++b) {
        band_excitance[b] = planck_excitance(
            wavenumber_from_nm(radiance.wavelengths_nm[b]), assumed_temperature_k,
            params);
    }

    EmissivityResult res;
    res.cube = radiance;
    res.cube.kind = CubeKind::Emissivity;
    const std::size_t pixels =
        static_cast<std::size_t>(radiance.frames) * radiance.height * radiance.width;
    res.outlier_mask.assign(pixels, 0);

    for (std::size_t p = 0; p < pixels; ++p) {
        double* spec = res.cube.data.data() + p * radiance.bands;
        bool out = false;
        for (int b = 0; b < radiance.bands; ++b) {
            spec[b] /= band_excitance[b];
            if (!(spec[b] >= 0.0 && spec[b] <= 1.0)) out = true;
        }
        if (out) {
            res.outlier_mask[p] = 1;
            ++res.outlier_count;
        }
    }
    return res;
}

namespace {

// Lower median of up to 9 values.
double median_of(double* vals, int count) {
    std::sort(vals, vals + count);
    return vals[(count - 1) / 2];
}

}  // namespace

HyperCube spectral_median_filter_3x3(const EmissivityResult& result) {
    const HyperCube& in = result.cube;
    HyperCube out = in;
    const int hgt = in.height, wid = in.width;

    for (int t = 0; t < in.frames; ++t) {
        for (int h = 0; h < hgt; ++h) {
            for (int w = 0; w < wid; ++w) {
                if (!result.is_outlier(t, h, w)) continue;
                for (int b = 0; b < in.bands; ++b) {
                    double window[9];
                    int n = 0;
                    for (int dh = -1; dh <= 1; ++dh) {
                        for (int dw = -1; dw <= 1; ++dw) {
                            const int hh = std::clamp(h + dh, 0, hgt - 1);
                            const int ww = std::clamp(w + dw, 0, wid - 1);
                            window[n++] = in.at(t, hh, ww, b);
                        }
                    }
                    out.at(t, h, w, b) = median_of(window, n);
                }
            }
        }
    }
    return out;
}

std::vector<double> median_filter(const std::vector<double>& image, int height,
                                  int width, int radius) {
    if (image.size() != static_cast<std::size_t>(height) * width) {
        throw DomainError("median_filter: image size mismatch");
    }
    const int side = 2 * radius + 1;
    std::vector<double> window(static_cast<std::size_t>(side) * side);
    std::vector<double> out(image.size());
    for (int h = 0; h < height; ++h) {
        for (int w = 0; w < width; ++w) {
            int n = 0;
            for (int dh = -radius; dh <= radius; ++dh) {
                for (int dw = -radius; dw <= radius; ++dw) {
                    const int hh = std::clamp(h + dh, 0, height - 1);
                    const int ww = std::clamp(w + dw, 0, width - 1);
                    window[n++] = image[static_cast<std::size_t>(hh) * width + ww];
                }
            }
            std::sort(window.begin(), window.begin() + n);
            out[static_cast<std::size_t>(h) * width + w] = window[(n - 1) / 2];
        }
    }
    return out;
}

std::vector<double> median_filter_9x9(const std::vector<double>& image,
                                      int height, int width) {
    return median_filter(image, height, width, 4);
}

}  // namespace plumeseg
