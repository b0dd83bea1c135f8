#ifndef PLUMESEG_GRAPH_HPP
#define PLUMESEG_GRAPH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "plumeseg/types.hpp"

namespace plumeseg {

enum class Metric { Cosine, Euclidean, ModifiedCosine };

Metric parse_metric(const std::string& name);  // cos | euc | mcos
std::string metric_name(Metric metric);

/// Per-pixel feature vectors: dim = m for raw spectra, 9m after the 3x3
/// neighborhood concatenation.
struct FeatureImage {
    int height = 0;
    int width = 0;
    int dim = 0;
    std::vector<double> data;  // pixel-major, row-major pixels

    int count() const { return height * width; }
    std::span<const double> feature(int i) const {
        return {data.data() + static_cast<std::size_t>(i) * dim,
                static_cast<std::size_t>(dim)};
    }
    std::span<double> feature(int i) {
        return {data.data() + static_cast<std::size_t>(i) * dim,
                static_cast<std::size_t>(dim)};
    }
};

/// Raw per-pixel spectra of one frame.
FeatureImage features_from_frame(const HyperCube& cube, int t);
FeatureImage features_from_scores(const ScoreVideo& scores, int t);
FeatureImage features_from_falsecolor(const FalseColorVideo& video, int t);

/// 3x3 neighborhood concatenation in row-major window order
/// (NW,N,NE,W,C,E,SW,S,SE), replicate padding; dim becomes 9x the input.
FeatureImage build_features(const FeatureImage& raw);

/// 1 - <x,y>/(|x||y|), in [0,2]. Zero-norm input raises DomainError.
double cosine_distance(std::span<const double> x, std::span<const double> y);
/// sqrt(<x-y, x-y>).
double euclidean_distance(std::span<const double> x, std::span<const double> y);
/// Feature vectors split into 9 blocks; sqrt of the sum of squared
/// per-block cosine distances, in [0,3]. Requires dim divisible by 9.
double modified_cosine_distance(std::span<const double> x,
                                std::span<const double> y);
double metric_distance(Metric metric, std::span<const double> x,
                       std::span<const double> y);

/// Dense pixel similarity graph. weights(i,j) = exp(-d(x_i,x_j)^2/sigma^2),
/// unit diagonal, exact symmetry (each pair computed once). Degrees include
/// the diagonal.
struct WeightedGraph {
    Eigen::MatrixXd weights;
    Eigen::VectorXd degree;

    int nodes() const { return static_cast<int>(weights.rows()); }
};

WeightedGraph build_graph(const FeatureImage& features, Metric metric,
                          double sigma);

/// Wraps an explicit weight matrix; validates symmetry, range and positive
/// degrees. Used by tests and by callers that assemble toy graphs.
WeightedGraph graph_from_weights(Eigen::MatrixXd weights);

/// L_s = I - D^{-1/2} W D^{-1/2}; symmetric, spectrum in [0,2].
Eigen::MatrixXd symmetric_laplacian(const WeightedGraph& graph);

/// Leading spectral data of L_s: eigenvalues ascending (equivalently the
/// largest eigenvalues of the normalized similarity N = I - L_s), columns
/// orthonormal under the usual sign convention.
struct LaplacianEigs {
    Eigen::VectorXd values;   // m, ascending, in [0,2]
    Eigen::MatrixXd vectors;  // n x m
    bool nystrom = false;
};

/// Dense path (Jacobi); rejects non-symmetric input. Intended for desk
/// scale (n up to a few thousand).
LaplacianEigs exact_eigs(const Eigen::MatrixXd& laplacian, int m);
LaplacianEigs exact_eigs(const WeightedGraph& graph, int m);

/// Nystrom approximation from `landmarks` uniformly sampled pixels
/// (seeded, without replacement): approximate degrees from the [A C]
/// blocks, block normalization, then the one-shot orthogonalization
/// through A^{-1/2} (A + A^{-1/2} C C^T A^{-1/2}) A^{-1/2}. Errors on an
/// ill-conditioned landmark block or non-positive approximate degree.
LaplacianEigs nystrom_eigs(const FeatureImage& features, Metric metric,
                           double sigma, int landmarks, int m,
                           std::uint64_t seed);

}  // namespace plumeseg

#endif
