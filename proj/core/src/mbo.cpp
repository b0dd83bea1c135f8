#include "plumeseg/mbo.hpp"

#include <algorithm>
#include <cmath>

#include "plumeseg/radiometry.hpp"

namespace plumeseg {

FidelityMask initialize_from_background_subtraction(const FeatureImage& frame,
                                                    const FeatureImage& previous,
                                                    double quantile) {
    if (frame.height != previous.height || frame.width != previous.width ||
        frame.dim != previous.dim) {
        throw DomainError("background subtraction: frame shapes differ");
    }
    if (!(quantile >= 0.0 && quantile < 1.0)) {
        throw DomainError("background subtraction: quantile must be in [0,1)");
    }
    const int n = frame.count();

    std::vector<double> diff(n);
    for (int i = 0; i < n; ++i) {
        diff[i] = euclidean_distance(frame.feature(i), previous.feature(i));
    }

    std::vector<double> sorted = diff;
    std::sort(sorted.begin(), sorted.end());
    const double qval =
        sorted[static_cast<std::size_t>(std::lround(quantile * (n - 1)))];

    std::vector<double> mask(n);
    for (int i = 0; i < n; ++i) mask[i] = (diff[i] > qval) ? 1.0 : 0.0;
    mask = median_filter_9x9(mask, frame.height, frame.width);

    FidelityMask fid;
    fid.height = frame.height;
    fid.width = frame.width;
    fid.weight.assign(n, 0.0);
    fid.seed.assign(n, -1.0);

    std::vector<std::uint8_t> seeded(n, 0);
    int seed_count = 0;
    for (int i = 0; i < n; ++i) {
        if (mask[i] >= 0.5) {
            seeded[i] = 1;
            ++seed_count;
        }
    }
    if (seed_count == 0) {
        throw EmptyChangeError("background subtraction: no change detected");
    }

    // 3-pixel (Chebyshev) dilation bounds the uncertain ring
    std::vector<std::uint8_t> dilated(n, 0);
    constexpr int kRing = 3;
    for (int h = 0; h < frame.height; ++h) {
        for (int w = 0; w < frame.width; ++w) {
            bool near = false;
            for (int dh = -kRing; dh <= kRing && !near; ++dh) {
                for (int dw = -kRing; dw <= kRing && !near; ++dw) {
                    const int hh = h + dh, ww = w + dw;
                    if (hh < 0 || hh >= frame.height || ww < 0 || ww >= frame.width)
                        continue;
                    if (seeded[static_cast<std::size_t>(hh) * frame.width + ww])
                        near = true;
                }
            }
            dilated[static_cast<std::size_t>(h) * frame.width + w] = near ? 1 : 0;
        }
    }

    for (int i = 0; i < n; ++i) {
        if (seeded[i]) {
            fid.seed[i] = 1.0;
            fid.weight[i] = 1.0;
        } else if (!dilated[i]) {
            fid.weight[i] = 1.0;  // trusted background, seed stays -1
        }
    }
    return fid;
}

MboResult mbo_segment(const LaplacianEigs& eigs, const FidelityMask& fidelity,
                      const MboConfig& config) {
    const int n = static_cast<int>(eigs.vectors.rows());
    const int m = static_cast<int>(eigs.values.size());
    if (m < 2) {
        throw DomainError("mbo_segment: need at least 2 eigenpairs");
    }
    for (int k = 0; k + 1 < m; ++k) {
        if (eigs.values[k] > eigs.values[k + 1]) {
            throw DomainError("mbo_segment: eigenvalues must be ascending");
        }
    }
    if (static_cast<int>(fidelity.weight.size()) != n ||
        static_cast<int>(fidelity.seed.size()) != n) {
        throw DomainError("mbo_segment: fidelity mask size mismatch");
    }
    bool any_weight = false;
    for (double w : fidelity.weight) any_weight = any_weight || (w != 0.0);
    if (!any_weight) {
        throw DomainError("mbo_segment: fidelity weight is identically zero");
    }
    if (!(config.dt > 0.0) || !(config.stop_tol > 0.0) || config.inner_steps < 1) {
        throw DomainError("mbo_segment: dt, stop_tol and inner_steps must be "
                          "positive");
    }

    const Eigen::Map<const Eigen::VectorXd> u0(fidelity.seed.data(), n);
    const Eigen::Map<const Eigen::VectorXd> lam(fidelity.weight.data(), n);
    const double c1 = config.fidelity_strength;
    const double dt = config.dt / config.inner_steps;

    Eigen::VectorXd denom(m);
    for (int k = 0; k < m; ++k) denom[k] = 1.0 + dt * eigs.values[k];

    Eigen::VectorXd u = u0;  // thresholded state, +/-1 valued
    Eigen::VectorXd y(n), a(m), forcing(n);

    MboResult result;
    int iter = 0;
    for (iter = 1; iter <= config.max_outer_iters; ++iter) {
        // diffusion in eigenspace with explicit fidelity forcing
        a = eigs.vectors.transpose() * u;
        y = u;
        for (int s = 0; s < config.inner_steps; ++s) {
            forcing = c1 * (lam.array() * (y - u0).array()).matrix();
            a = (a - dt * (eigs.vectors.transpose() * forcing)).array() /
                denom.array();
            y = eigs.vectors * a;
        }

        GlEnergy energy;
        energy.dirichlet = (a.array().square() *
                            Eigen::Map<const Eigen::ArrayXd>(eigs.values.data(), m))
                               .sum();
        for (int i = 0; i < n; ++i) {
            const double w2 = y[i] * y[i] - 1.0;
            energy.potential += w2 * w2;
            const double r = y[i] - u0[i];
            energy.fidelity += 0.5 * c1 * lam[i] * r * r;
        }
        result.trace.push_back(energy);

        // threshold: u(x) >= 0 maps to +1
        int flips = 0;
        for (int i = 0; i < n; ++i) {
            const double next = (y[i] >= 0.0) ? 1.0 : -1.0;
            if (next != u[i]) ++flips;
            u[i] = next;
        }
        const double rel = 4.0 * flips / static_cast<double>(n);
        if (rel < config.stop_tol) break;
    }
    result.iterations = std::min(iter, config.max_outer_iters);

    bool all_pos = true, all_neg = true;
    for (int i = 0; i < n; ++i) {
        all_pos = all_pos && u[i] > 0.0;
        all_neg = all_neg && u[i] < 0.0;
    }
    if (all_pos || all_neg) {
        for (int i = 0; i < n; ++i) {
            if (fidelity.weight[i] != 0.0 && fidelity.seed[i] != u[i]) {
                result.collapsed = true;
                break;
            }
        }
    }

    result.phase.height = fidelity.height;
    result.phase.width = fidelity.width;
    result.phase.u.assign(u.data(), u.data() + n);
    return result;
}

std::vector<MboResult> segment_video_detailed(const ScoreVideo& scores,
                                              const MboConfig& config) {
    if (scores.frames < 2) {
        throw DomainError("segment_video: need at least 2 frames");
    }
    const int n = scores.height * scores.width;

    std::vector<MboResult> results;
    results.reserve(scores.frames);

    MboResult background;
    background.phase.height = scores.height;
    background.phase.width = scores.width;
    background.phase.u.assign(n, -1.0);
    results.push_back(background);  // frame 0 has no predecessor

    for (int t = 1; t < scores.frames; ++t) {
        const FeatureImage cur = features_from_scores(scores, t);
        const FeatureImage prev = features_from_scores(scores, t - 1);
        FidelityMask fid;
        try {
            fid = initialize_from_background_subtraction(cur, prev,
                                                         config.init_quantile);
        } catch (const EmptyChangeError&) {
            results.push_back(background);
            continue;
        }

        LaplacianEigs eigs;
        if (config.eigs.use_nystrom) {
            const int landmarks = std::min(config.eigs.landmarks, n);
            const int m = std::min(config.eigenpairs, landmarks);
            eigs = nystrom_eigs(cur, config.metric, config.sigma, landmarks, m,
                                config.eigs.seed + static_cast<std::uint64_t>(t));
        } else {
            const int m = std::min(config.eigenpairs, n);
            eigs = exact_eigs(build_graph(cur, config.metric, config.sigma), m);
        }

        results.push_back(mbo_segment(eigs, fid, config));
    }
    return results;
}

std::vector<PhaseField> segment_video(const ScoreVideo& scores,
                                      const MboConfig& config) {
    std::vector<MboResult> detailed = segment_video_detailed(scores, config);
    std::vector<PhaseField> fields;
    fields.reserve(detailed.size());
    for (auto& r : detailed) fields.push_back(std::move(r.phase));
    return fields;
}

}  // namespace plumeseg
