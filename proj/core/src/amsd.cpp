#include "plumeseg/amsd.hpp"

#include <cmath>
#include <limits>

#include "plumeseg/dimred.hpp"
#include "plumeseg/errors.hpp"
#include "plumeseg/jacobi.hpp"

namespace plumeseg {

Projector Projector::complemented() const {
    Projector out;
    out.matrix =
        Eigen::MatrixXd::Identity(matrix.rows(), matrix.cols()) - matrix;
    out.complement = !complement;
    return out;
}

Projector build_projector(const Eigen::MatrixXd& basis) {
    const Eigen::Index rows = basis.rows(), cols = basis.cols();
    if (rows == 0 || cols == 0 || cols > rows) {
        throw DomainError("build_projector: basis must be tall and non-empty");
    }
    // modified Gram-Schmidt with re-orthogonalization pass
    Eigen::MatrixXd q = basis;
    for (Eigen::Index j = 0; j < cols; ++j) {
        const double original_norm = basis.col(j).norm();
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index i = 0; i < j; ++i) {
                q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
            }
        }
        const double norm = q.col(j).norm();
        if (norm <= 1e-10 * std::max(original_norm, 1e-300)) {
            throw DomainError("build_projector: column " + std::to_string(j) +
                              " is linearly dependent on earlier columns");
        }
        q.col(j) /= norm;
    }
    Projector p;
    p.matrix = q * q.transpose();
    p.complement = false;
    return p;
}

SubspaceModel::SubspaceModel(Eigen::MatrixXd target, Eigen::MatrixXd background,
                             double threshold)
    : target_(std::move(target)),
      background_(std::move(background)),
      threshold_(threshold) {
    const Eigen::Index bands = target_.rows();
    if (background_.rows() != bands) {
        throw DomainError("subspace model: target and background band counts differ");
    }
    const Eigen::Index pt = target_.cols(), pb = background_.cols();
    if (pt < 1 || pb < 1) {
        throw DomainError("subspace model: need at least one target and one "
                          "background signature");
    }
    if (pt + pb >= bands) {
        throw DomainError("subspace model: p_t + p_b must be smaller than the "
                          "band count");
    }

    Eigen::MatrixXd combined(bands, pt + pb);
    combined << target_, background_;

    // linear independence: singular values via the Gram matrix spectrum
    const Eigen::MatrixXd gram = combined.transpose() * combined;
    const SymEig eig = jacobi_eigensymm(gram);
    const double smax = std::sqrt(std::max(0.0, eig.values[eig.values.size() - 1]));
    const double smin = std::sqrt(std::max(0.0, eig.values[0]));
    if (!(smin > 1e-10 * smax)) {
        throw DomainError("subspace model: combined signature matrix is "
                          "rank-deficient (singular value ratio " +
                          std::to_string(smax > 0 ? smin / smax : 0.0) + ")");
    }

    pb_perp_ = build_projector(background_).complemented().matrix;
    ps_perp_ = build_projector(combined).complemented().matrix;
}

double amsd_statistic(const Eigen::VectorXd& x, const SubspaceModel& model) {
    if (x.size() != model.spectral_components()) {
        throw DomainError("amsd_statistic: vector length mismatch");
    }
    const double norm2 = x.squaredNorm();
    if (!(norm2 > 0.0)) {
        throw DomainError("amsd_statistic: zero pixel vector");
    }
    const double qb = x.dot(model.background_complement() * x);
    const double qs = x.dot(model.combined_complement() * x);
    double numerator = qb - qs;
    if (numerator < 0.0) numerator = 0.0;  // rounding only; operator is PSD
    if (qs < 1e-30 * norm2) {
        return std::numeric_limits<double>::infinity();
    }
    return numerator / qs;
}

DetectionMap detect(const HyperCube& cube, int frame, const SubspaceModel& model,
                    double threshold) {
    cube.validate();
    if (frame < 0 || frame >= cube.frames) {
        throw DomainError("detect: frame index out of range");
    }
    if (cube.bands != model.spectral_components()) {
        throw DomainError("detect: cube band count does not match model");
    }
    DetectionMap map;
    map.height = cube.height;
    map.width = cube.width;
    map.threshold = threshold;
    const std::size_t n = static_cast<std::size_t>(cube.height) * cube.width;
    map.statistic.resize(n);
    map.mask.resize(n);

    Eigen::VectorXd x(cube.bands);
    for (int h = 0; h < cube.height; ++h) {
        for (int w = 0; w < cube.width; ++w) {
            const auto spec = cube.spectrum(frame, h, w);
            for (int b = 0; b < cube.bands; ++b) x[b] = spec[b];
            const std::size_t i = static_cast<std::size_t>(h) * cube.width + w;
            map.statistic[i] = amsd_statistic(x, model);
            map.mask[i] = (map.statistic[i] >= threshold) ? 1 : 0;
        }
    }
    return map;
}

std::vector<double> pooled_statistics(const HyperCube& cube, int t_begin,
                                      int t_end, const SubspaceModel& model) {
    if (t_begin < 0 || t_end > cube.frames || t_begin >= t_end) {
        throw DomainError("pooled_statistics: bad frame range");
    }
    std::vector<double> stats;
    stats.reserve(static_cast<std::size_t>(t_end - t_begin) * cube.height *
                  cube.width);
    Eigen::VectorXd x(cube.bands);
    for (int t = t_begin; t < t_end; ++t) {
        for (int h = 0; h < cube.height; ++h) {
            for (int w = 0; w < cube.width; ++w) {
                const auto spec = cube.spectrum(t, h, w);
                for (int b = 0; b < cube.bands; ++b) x[b] = spec[b];
                stats.push_back(amsd_statistic(x, model));
            }
        }
    }
    return stats;
}

Eigen::MatrixXd estimate_background(const HyperCube& pre_release_frames,
                                    int p_b) {
    pre_release_frames.validate();
    if (p_b < 1 || p_b >= pre_release_frames.bands) {
        throw DomainError("estimate_background: p_b must be in [1, bands)");
    }
    const PcaModel model = fit_pca(pre_release_frames, p_b, /*centered=*/false);
    return model.components;
}

}  // namespace plumeseg
