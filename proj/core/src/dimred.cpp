#include "plumeseg/dimred.hpp"

#include <algorithm>
#include <cmath>

#include "plumeseg/errors.hpp"
#include "plumeseg/jacobi.hpp"

namespace plumeseg {

PcaModel fit_pca(const HyperCube& cube, int k, bool centered) {
    cube.validate();
    const int bands = cube.bands;
    if (k < 1 || k > bands) {
        throw DomainError("fit_pca: k must be in [1, bands], got " +
                          std::to_string(k));
    }
    const std::size_t n =
        static_cast<std::size_t>(cube.frames) * cube.height * cube.width;
    if (n < static_cast<std::size_t>(k) || n < 2) {
        throw DomainError("fit_pca: need at least max(k, 2) pixels");
    }

    PcaModel model;
    model.centered = centered;
    model.mean = Eigen::VectorXd::Zero(bands);
    if (centered) {
        for (std::size_t p = 0; p < n; ++p) {
            const double* x = cube.data.data() + p * bands;
            for (int b = 0; b < bands; ++b) model.mean[b] += x[b];
        }
        model.mean /= static_cast<double>(n);
    }

    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(bands, bands);
    Eigen::VectorXd d(bands);
    for (std::size_t p = 0; p < n; ++p) {
        const double* x = cube.data.data() + p * bands;
        for (int b = 0; b < bands; ++b) d[b] = x[b] - model.mean[b];
        for (int i = 0; i < bands; ++i) {
            for (int j = i; j < bands; ++j) cov(i, j) += d[i] * d[j];
        }
    }
    cov /= static_cast<double>(n - 1);
    for (int i = 0; i < bands; ++i) {
        for (int j = 0; j < i; ++j) cov(i, j) = cov(j, i);
    }

    const double mean_scale = std::max(1.0, model.mean.squaredNorm());
    if (cov.trace() <= 1e-24 * mean_scale) {
        model.degenerate = true;
        model.components = Eigen::MatrixXd::Identity(bands, bands).leftCols(k);
        model.eigenvalues = Eigen::VectorXd::Zero(k);
        return model;
    }

    SymEig eig = jacobi_eigensymm(cov);  // ascending
    model.components.resize(bands, k);
    model.eigenvalues.resize(k);
    for (int j = 0; j < k; ++j) {
        const int src = bands - 1 - j;  // descending
        model.components.col(j) = eig.vectors.col(src);
        model.eigenvalues[j] = std::max(0.0, eig.values[src]);
    }
    apply_sign_convention(model.components);
    return model;
}

ScoreVideo project(const HyperCube& cube, const PcaModel& model) {
    cube.validate();
    if (model.components.rows() != cube.bands) {
        throw DomainError("project: model has " +
                          std::to_string(model.components.rows()) +
                          " bands, cube has " + std::to_string(cube.bands));
    }
    const int k = static_cast<int>(model.components.cols());
    ScoreVideo scores;
    scores.frames = cube.frames;
    scores.height = cube.height;
    scores.width = cube.width;
    scores.channels = k;
    const std::size_t n =
        static_cast<std::size_t>(cube.frames) * cube.height * cube.width;
    scores.data.resize(n * k);

    Eigen::VectorXd x(cube.bands);
    for (std::size_t p = 0; p < n; ++p) {
        const double* src = cube.data.data() + p * cube.bands;
        for (int b = 0; b < cube.bands; ++b) x[b] = src[b] - model.mean[b];
        Eigen::VectorXd s = model.components.transpose() * x;
        for (int j = 0; j < k; ++j) scores.data[p * k + j] = s[j];
    }
    return scores;
}

FalseColorVideo false_color(const ScoreVideo& scores,
                            const ComponentSelection& selection) {
    for (int idx : selection.indices) {
        if (idx < 1 || idx > scores.channels) {
            throw DomainError("false_color: component index " +
                              std::to_string(idx) + " outside [1, " +
                              std::to_string(scores.channels) + "]");
        }
    }
    if (selection.indices[0] == selection.indices[1] ||
        selection.indices[0] == selection.indices[2] ||
        selection.indices[1] == selection.indices[2]) {
        throw DomainError("false_color: component indices must be distinct");
    }

    FalseColorVideo video;
    video.frames = scores.frames;
    video.height = scores.height;
    video.width = scores.width;
    const std::size_t n =
        static_cast<std::size_t>(scores.frames) * scores.height * scores.width;
    video.data.resize(n * 3);

    for (int c = 0; c < 3; ++c) {
        const int ch = selection.indices[c] - 1;
        double lo = scores.data[ch], hi = scores.data[ch];
        for (std::size_t p = 0; p < n; ++p) {
            const double v = scores.data[p * scores.channels + ch];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (lo == hi) {
            for (std::size_t p = 0; p < n; ++p) video.data[p * 3 + c] = 0.5;
            continue;
        }
        const double scale = 1.0 / (hi - lo);
        for (std::size_t p = 0; p < n; ++p) {
            const double v = scores.data[p * scores.channels + ch];
            video.data[p * 3 + c] = std::clamp((v - lo) * scale, 0.0, 1.0);
        }
    }
    return video;
}

HyperCube scores_to_cube(const ScoreVideo& scores) {
    HyperCube cube;
    cube.frames = scores.frames;
    cube.height = scores.height;
    cube.width = scores.width;
    cube.bands = scores.channels;
    cube.kind = CubeKind::Radiance;
    cube.wavelengths_nm.resize(scores.channels);
    for (int b = 0; b < scores.channels; ++b) cube.wavelengths_nm[b] = b + 1;
    cube.data = scores.data;
    return cube;
}

ScoreVideo cube_to_scores(const HyperCube& cube) {
    cube.validate();
    ScoreVideo scores;
    scores.frames = cube.frames;
    scores.height = cube.height;
    scores.width = cube.width;
    scores.channels = cube.bands;
    scores.data = cube.data;
    return scores;
}

}  // namespace plumeseg
