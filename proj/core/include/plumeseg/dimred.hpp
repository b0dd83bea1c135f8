#ifndef PLUMESEG_DIMRED_HPP
#define PLUMESEG_DIMRED_HPP

#include <array>

#include <Eigen/Core>

#include "plumeseg/types.hpp"

namespace plumeseg {

/// PCA over all T*H*W pixel spectra. Components act as spectral filters.
struct PcaModel {
    Eigen::VectorXd mean;        // zero vector in uncentered mode
    Eigen::MatrixXd components;  // bands x k, orthonormal columns
    Eigen::VectorXd eigenvalues; // k, descending, clamped at 0
    bool centered = true;
    bool degenerate = false;     // zero-variance input; identity completion
};

/// Covariance is (1/(n-1)) sum (x-mu)(x-mu)^T, eigensolved by Jacobi
/// rotations. Deterministic output: repeated fits are byte-identical
/// (descending eigenvalues, each component's largest-magnitude entry made
/// positive, ties to the lowest band). `centered = false` skips the mean
/// subtraction for fidelity experiments and background-basis estimation.
PcaModel fit_pca(const HyperCube& cube, int k, bool centered = true);

/// Per-pixel scores components^T (x - mean).
ScoreVideo project(const HyperCube& cube, const PcaModel& model);

/// 1-based component indices mapped to R, G, B in order.
struct ComponentSelection {
    std::array<int, 3> indices{1, 3, 5};
};

/// Min-max normalizes each selected score channel over the WHOLE video
/// (global, so residual inter-frame variation stays visible for Midway to
/// remove). A constant channel maps to 0.5.
FalseColorVideo false_color(const ScoreVideo& scores,
                            const ComponentSelection& selection);

/// Score videos piggyback on the HSC1 container: kind = radiance, band b
/// stored with wavelength b+1 nm.
HyperCube scores_to_cube(const ScoreVideo& scores);
ScoreVideo cube_to_scores(const HyperCube& cube);

}  // namespace plumeseg

#endif
