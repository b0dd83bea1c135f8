#include "plumeseg/midway.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "plumeseg/errors.hpp"

namespace plumeseg {

std::vector<double> frame_quantile_function(std::span<const double> values,
                                            int levels) {
    if (levels < 2) {
        throw DomainError("frame_quantile_function: need at least 2 levels");
    }
    if (values.empty()) {
        throw DomainError("frame_quantile_function: empty frame");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());

    std::vector<double> table(levels);
    for (int i = 0; i < levels; ++i) {
        const double q = (i + 0.5) / levels;
        double p = q * n - 0.5;  // sorted[j] sits exactly at quantile (j+0.5)/n
        p = std::clamp(p, 0.0, n - 1.0);
        const std::size_t j = static_cast<std::size_t>(p);
        const double frac = p - static_cast<double>(j);
        const double hi = (j + 1 < sorted.size()) ? sorted[j + 1] : sorted[j];
        table[i] = sorted[j] * (1.0 - frac) + hi * frac;
    }
    return table;
}

namespace {

// piecewise-linear evaluation of a quantile table at q, ends clamped
double eval_table(const std::vector<double>& table, double q) {
    const int levels = static_cast<int>(table.size());
    double p = q * levels - 0.5;  // grid point i lives at q = (i+0.5)/levels
    p = std::clamp(p, 0.0, static_cast<double>(levels - 1));
    const std::size_t i = static_cast<std::size_t>(p);
    const double frac = p - static_cast<double>(i);
    const double hi = (i + 1 < table.size()) ? table[i + 1] : table[i];
    return table[i] * (1.0 - frac) + hi * frac;
}

}  // namespace

void midway_equalize_channel(std::vector<double>& data, int frames,
                             int pixels_per_frame, int stride, int channel,
                             int levels) {
    if (frames < 1 || pixels_per_frame < 1) {
        throw DomainError("midway_equalize_channel: empty video");
    }
    const std::size_t frame_stride =
        static_cast<std::size_t>(pixels_per_frame) * stride;

    // average of per-frame inverse CDFs on the shared quantile grid
    std::vector<double> mid(levels, 0.0);
    std::vector<double> channel_values(pixels_per_frame);
    for (int t = 0; t < frames; ++t) {
        const double* frame = data.data() + t * frame_stride;
        for (int p = 0; p < pixels_per_frame; ++p) {
            channel_values[p] = frame[static_cast<std::size_t>(p) * stride + channel];
        }
        const std::vector<double> table =
            frame_quantile_function(channel_values, levels);
        for (int i = 0; i < levels; ++i) mid[i] += table[i];
    }
    for (int i = 0; i < levels; ++i) mid[i] /= frames;

    // remap each frame through the midway table at its own quantiles
    std::vector<int> order(pixels_per_frame);
    const double n = static_cast<double>(pixels_per_frame);
    for (int t = 0; t < frames; ++t) {
        double* frame = data.data() + t * frame_stride;
        for (int p = 0; p < pixels_per_frame; ++p) {
            channel_values[p] = frame[static_cast<std::size_t>(p) * stride + channel];
        }
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return channel_values[a] < channel_values[b];
        });
        // midranks keep tied values tied after remapping
        int run_begin = 0;
        while (run_begin < pixels_per_frame) {
            int run_end = run_begin + 1;
            while (run_end < pixels_per_frame &&
                   channel_values[order[run_end]] ==
                       channel_values[order[run_begin]]) {
                ++run_end;
            }
            const double mid_rank = 0.5 * (run_begin + (run_end - 1));
            const double q = (mid_rank + 0.5) / n;
            const double mapped = eval_table(mid, q);
            for (int r = run_begin; r < run_end; ++r) {
                frame[static_cast<std::size_t>(order[r]) * stride + channel] =
                    mapped;
            }
            run_begin = run_end;
        }
    }
}

FalseColorVideo midway_equalize(const FalseColorVideo& video, int levels) {
    video.validate();
    FalseColorVideo out = video;
    const int pixels = video.height * video.width;
    for (int c = 0; c < 3; ++c) {
        midway_equalize_channel(out.data, video.frames, pixels, 3, c, levels);
    }
    for (double& v : out.data) v = std::clamp(v, 0.0, 1.0);
    return out;
}

ScoreVideo midway_equalize_scores(const ScoreVideo& scores, int levels) {
    ScoreVideo out = scores;
    const int pixels = scores.height * scores.width;
    for (int c = 0; c < scores.channels; ++c) {
        midway_equalize_channel(out.data, scores.frames, pixels, scores.channels,
                                c, levels);
    }
    return out;
}

}  // namespace plumeseg
