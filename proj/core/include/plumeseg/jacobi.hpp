#ifndef PLUMESEG_JACOBI_HPP
#define PLUMESEG_JACOBI_HPP

#include <Eigen/Core>

namespace plumeseg {

/// Eigendecomposition of a real symmetric matrix, eigenvalues ascending,
/// eigenvectors in matching columns with unit norm.
struct SymEig {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm falls
/// below tol * ||A||_F (or max_sweeps is hit). Deterministic: fixed sweep
/// order, eigenpairs sorted by (value, original position).
///
/// Input must be symmetric to 1e-10 * max|A_ij|; violations raise
/// DomainError.
SymEig jacobi_eigensymm(const Eigen::MatrixXd& matrix, double tol = 1e-14,
                        int max_sweeps = 64);

/// Flips each column so its largest-magnitude entry is positive, ties
/// resolved toward the lowest row index. Shared by every module that
/// promises reproducible eigenvector output.
void apply_sign_convention(Eigen::MatrixXd& vectors);

}  // namespace plumeseg

#endif
