#ifndef PLUMESEG_CLUSTER_HPP
#define PLUMESEG_CLUSTER_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "plumeseg/graph.hpp"
#include "plumeseg/types.hpp"

namespace plumeseg {

struct KMeansConfig {
    int k = 1;
    Metric metric = Metric::Euclidean;
    int max_iters = 300;
    std::uint64_t seed = 0;
    std::vector<int> initial_centroids;  // pixel indices; empty = seeded draw
};

struct KMeansResult {
    Labeling labels;
    Eigen::MatrixXd centroids;  // k x dim
    int iterations = 0;
};

/// Lloyd iteration under the configured distance. Centroid update is the
/// arithmetic mean for every metric; assignment ties break toward the
/// lowest centroid index; an emptied cluster is re-seeded with the point
/// farthest from its old centroid. Terminates when a pass leaves every
/// assignment unchanged (reported iterations exclude the confirming pass)
/// or at max_iters.
KMeansResult kmeans(const FeatureImage& features, const KMeansConfig& config);

struct EigsConfig {
    bool use_nystrom = false;
    int landmarks = 0;
    std::uint64_t seed = 0;
};

struct SpectralConfig {
    int k = 2;
    int eigenvectors = 0;  // 0 = use k
    Metric metric = Metric::Euclidean;
    double sigma = 1.0;
    EigsConfig eigs;
    std::uint64_t kmeans_seed = 0;
};

struct SpectralResult {
    Labeling labels;
    LaplacianEigs eigs;
};

/// Jordan-Weiss style: leading Laplacian eigenvectors, the trivial first
/// one dropped, rows of the remaining embedding normalized to unit length
/// (numerically zero rows left alone), then Euclidean k-means.
SpectralResult spectral_cluster(const FeatureImage& features,
                                const SpectralConfig& config);

/// Same on a prebuilt graph (always the exact dense eigensolver).
SpectralResult spectral_cluster_graph(const WeightedGraph& graph,
                                      const SpectralConfig& config);

/// Each eigenvector reshaped row-major to H x W and min-max normalized to
/// [0,1]; a constant eigenvector maps to 0.5.
std::vector<std::vector<double>> eigenvector_images(const LaplacianEigs& eigs,
                                                    int height, int width);

}  // namespace plumeseg

#endif
