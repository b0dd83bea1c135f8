#ifndef PLUMESEG_MIDWAY_HPP
#define PLUMESEG_MIDWAY_HPP

#include <span>
#include <vector>

#include "plumeseg/types.hpp"

namespace plumeseg {

constexpr int kMidwayQuantileLevels = 1024;

/// Empirical inverse CDF of `values` sampled at q_i = (i + 0.5) / levels:
/// order statistics with linear interpolation, ends clamped.
std::vector<double> frame_quantile_function(std::span<const double> values,
                                            int levels);

/// Midway equalization of one channel across frames: every frame's values
/// are remapped through the average of the per-frame inverse CDFs,
/// evaluated at each pixel's own within-frame quantile (midranks for
/// ties, so equal values stay equal). `data` is pixel-major with
/// `stride` channels per pixel; channel `channel` is updated in place.
void midway_equalize_channel(std::vector<double>& data, int frames,
                             int pixels_per_frame, int stride, int channel,
                             int levels);

/// All three channels independently; output clamped to [0,1].
FalseColorVideo midway_equalize(const FalseColorVideo& video,
                                int levels = kMidwayQuantileLevels);

/// Same construction on score videos (every channel equalized).
ScoreVideo midway_equalize_scores(const ScoreVideo& scores,
                                  int levels = kMidwayQuantileLevels);

}  // namespace plumeseg

#endif
