#ifndef PLUMESEG_RADIOMETRY_HPP
#define PLUMESEG_RADIOMETRY_HPP

#include <cstdint>
#include <vector>

#include "plumeseg/types.hpp"

namespace plumeseg {

/// CODATA 2018 constants, pinned so tests can assert against them.
struct PlanckParams {
    double planck_h = 6.62607015e-34;   // J s
    double light_c = 299792458.0;       // m / s
    double boltzmann_k = 1.380649e-23;  // J / K
};

/// Blackbody spectral excitance 2 h c^2 nu^3 / (exp(h c nu / k T) - 1)
/// at wavenumber nu (1/m) and temperature T (K). For h c nu / (k T) > 700
/// returns 0.0 instead of overflowing the exponential. nu <= 0 or T <= 0
/// raise DomainError.
double planck_excitance(double wavenumber_per_m, double temperature_k,
                        const PlanckParams& params = {});

/// Wavenumber (1/m) for a wavelength given in nanometers.
double wavenumber_from_nm(double wavelength_nm);

/// Emissivity cube plus the per-(frame, pixel) out-of-range flags raised
/// before any cleaning.
struct EmissivityResult {
    HyperCube cube;                        // kind == Emissivity
    std::vector<std::uint8_t> outlier_mask;  // frames*height*width
    std::size_t outlier_count = 0;

    bool is_outlier(int t, int h, int w) const {
        return outlier_mask[cube.pixel_index(t, h, w)] != 0;
    }
};

/// Divides each sample by the blackbody excitance at the band wavenumber
/// and the single assumed scene temperature. Pixels with any band outside
/// [0, 1] are flagged; values are reported unclamped so the filter sees
/// the raw conversion.
EmissivityResult radiance_to_emissivity(const HyperCube& radiance,
                                        double assumed_temperature_k,
                                        const PlanckParams& params = {});

/// Replaces only the flagged pixels: each one's spectrum becomes the
/// per-band median of its 3x3 spatial neighborhood (replicate padding,
/// original data). Non-flagged pixels pass through untouched.
HyperCube spectral_median_filter_3x3(const EmissivityResult& result);

/// Plain 2-D median with replicate padding; the lower median is taken so
/// results stay deterministic for any window content.
std::vector<double> median_filter(const std::vector<double>& image, int height,
                                  int width, int radius);

/// 9x9 window, the cleaning step used by the segmentation initialization.
std::vector<double> median_filter_9x9(const std::vector<double>& image,
                                      int height, int width);

}  // namespace plumeseg

#endif
