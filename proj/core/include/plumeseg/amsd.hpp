#ifndef PLUMESEG_AMSD_HPP
#define PLUMESEG_AMSD_HPP

#include <Eigen/Core>

#include "plumeseg/types.hpp"

namespace plumeseg {

/// Orthogonal projector onto (or away from) the span of a signature matrix.
struct Projector {
    Eigen::MatrixXd matrix;  // symmetric, idempotent
    bool complement = false;

    Projector complemented() const;
};

/// P = Q Q^T with Q from modified Gram-Schmidt on the columns of `basis`.
/// Rank deficiency raises DomainError naming the deficient column.
Projector build_projector(const Eigen::MatrixXd& basis);

/// Target + background signature subspaces with the projectors the
/// statistic needs. Immutable after construction.
class SubspaceModel {
public:
    /// Columns of [target | background] must be linearly independent
    /// (smallest singular value > 1e-10 * largest) and together thinner
    /// than the band count.
    SubspaceModel(Eigen::MatrixXd target, Eigen::MatrixXd background,
                  double threshold = 0.0);

    const Eigen::MatrixXd& target() const { return target_; }
    const Eigen::MatrixXd& background() const { return background_; }
    int spectral_components() const { return static_cast<int>(target_.rows()); }
    double threshold() const { return threshold_; }
    void set_threshold(double l0) { threshold_ = l0; }

    const Eigen::MatrixXd& background_complement() const { return pb_perp_; }
    const Eigen::MatrixXd& combined_complement() const { return ps_perp_; }

private:
    Eigen::MatrixXd target_;
    Eigen::MatrixXd background_;
    Eigen::MatrixXd pb_perp_;  // I - P_b
    Eigen::MatrixXd ps_perp_;  // I - P_[t|b]
    double threshold_;
};

/// Generalized-likelihood-ratio statistic
///   x^T (Pb_perp - Ps_perp) x / (x^T Ps_perp x).
/// The numerator is clamped at 0 against rounding; a vanishing denominator
/// (< 1e-30 ||x||^2, pixel fully inside the combined span) returns +inf.
double amsd_statistic(const Eigen::VectorXd& x, const SubspaceModel& model);

/// Applies the statistic to every pixel of one frame; mask = stat >= l0.
DetectionMap detect(const HyperCube& cube, int frame, const SubspaceModel& model,
                    double threshold);

/// All per-pixel statistics of the given frames, pooled (used for
/// threshold calibration on target-free data).
std::vector<double> pooled_statistics(const HyperCube& cube, int t_begin,
                                      int t_end, const SubspaceModel& model);

/// Top p_b principal directions of the pooled pre-release pixel spectra
/// (uncentered PCA, so the background mean direction stays in the span).
/// Columns orthonormal.
Eigen::MatrixXd estimate_background(const HyperCube& pre_release_frames, int p_b);

}  // namespace plumeseg

#endif
