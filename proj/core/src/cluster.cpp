#include "plumeseg/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plumeseg/errors.hpp"
#include "plumeseg/parallel.hpp"
#include "plumeseg/rng.hpp"

namespace plumeseg {

KMeansResult kmeans(const FeatureImage& features, const KMeansConfig& config) {
    const int n = features.count();
    const int dim = features.dim;
    const int k = config.k;
    if (k < 1 || k > n) {
        throw DomainError("kmeans: k must be in [1, pixels], got " +
                          std::to_string(k));
    }

    std::vector<int> init = config.initial_centroids;
    if (init.empty()) {
        init = sample_without_replacement(n, k, config.seed);
    }
    if (static_cast<int>(init.size()) != k) {
        throw DomainError("kmeans: initial centroid list must have k entries");
    }
    for (int i : init) {
        if (i < 0 || i >= n) {
            throw DomainError("kmeans: initial centroid index out of range");
        }
    }

    // centroids stored row-major (k x dim) so rows view as spans
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
        centroids(k, dim);
    for (int c = 0; c < k; ++c) {
        const auto f = features.feature(init[c]);
        for (int d = 0; d < dim; ++d) centroids(c, d) = f[d];
    }

    auto assign = [&](std::vector<int>& labels) {
        parallel_for(0, n, [&](int i) {
            const auto x = features.feature(i);
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const std::span<const double> mu{
                    centroids.data() + static_cast<std::size_t>(c) * dim,
                    static_cast<std::size_t>(dim)};
                const double d = metric_distance(config.metric, x, mu);
                if (d < best_d) {  // strict: ties keep the lowest index
                    best_d = d;
                    best = c;
                }
            }
            labels[i] = best;
        });
    };

    auto update = [&](const std::vector<int>& labels) {
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
            sums = Eigen::MatrixXd::Zero(k, dim);
        std::vector<std::size_t> counts(k, 0);
        for (int i = 0; i < n; ++i) {
            const auto x = features.feature(i);
            for (int d = 0; d < dim; ++d) sums(labels[i], d) += x[d];
            ++counts[labels[i]];
        }
        std::vector<std::uint8_t> taken(n, 0);
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                for (int d = 0; d < dim; ++d) {
                    centroids(c, d) = sums(c, d) / static_cast<double>(counts[c]);
                }
            } else {
                // re-seed with the point farthest from the stale centroid
                int far = -1;
                double far_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    if (taken[i]) continue;
                    const std::span<const double> mu{
                        centroids.data() + static_cast<std::size_t>(c) * dim,
                        static_cast<std::size_t>(dim)};
                    const double d =
                        metric_distance(config.metric, features.feature(i), mu);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                taken[far] = 1;
                const auto f = features.feature(far);
                for (int d = 0; d < dim; ++d) centroids(c, d) = f[d];
            }
        }
    };

    std::vector<int> labels(n), next(n);
    assign(labels);
    int iterations = 1;
    for (; iterations <= config.max_iters; ++iterations) {
        update(labels);
        assign(next);
        if (next == labels) break;
        labels = next;
        if (iterations == config.max_iters) break;
    }
    iterations = std::min(iterations, config.max_iters);

    KMeansResult result;
    result.labels.height = features.height;
    result.labels.width = features.width;
    result.labels.num_clusters = k;
    result.labels.labels = std::move(labels);
    result.centroids = centroids;
    result.iterations = iterations;
    return result;
}

namespace {

SpectralResult cluster_embedding(LaplacianEigs eigs, int n, int height,
                                 int width, const SpectralConfig& config) {
    const int m = static_cast<int>(eigs.values.size());
    if (m < 2) {
        throw DomainError("spectral_cluster: need at least 2 eigenvectors");
    }

    // drop the trivial leading eigenvector, row-normalize the rest
    FeatureImage embedding;
    embedding.height = height;
    embedding.width = width;
    embedding.dim = m - 1;
    embedding.data.resize(static_cast<std::size_t>(n) * (m - 1));
    for (int i = 0; i < n; ++i) {
        double norm2 = 0.0;
        for (int j = 1; j < m; ++j) norm2 += eigs.vectors(i, j) * eigs.vectors(i, j);
        const double scale = (norm2 > 1e-30) ? 1.0 / std::sqrt(norm2) : 0.0;
        for (int j = 1; j < m; ++j) {
            embedding.data[static_cast<std::size_t>(i) * (m - 1) + (j - 1)] =
                eigs.vectors(i, j) * scale;
        }
    }

    KMeansConfig km;
    km.k = config.k;
    km.metric = Metric::Euclidean;
    km.seed = config.kmeans_seed;
    KMeansResult kres = kmeans(embedding, km);

    SpectralResult out;
    out.labels = std::move(kres.labels);
    out.eigs = std::move(eigs);
    return out;
}

}  // namespace

SpectralResult spectral_cluster(const FeatureImage& features,
                                const SpectralConfig& config) {
    if (config.k < 1) {
        throw DomainError("spectral_cluster: k must be at least 1");
    }
    const int m = (config.eigenvectors > 0) ? config.eigenvectors : config.k;
    if (m < config.k) {
        throw DomainError("spectral_cluster: eigenvector count below k");
    }
    LaplacianEigs eigs;
    if (config.eigs.use_nystrom) {
        eigs = nystrom_eigs(features, config.metric, config.sigma,
                            config.eigs.landmarks, m, config.eigs.seed);
    } else {
        eigs = exact_eigs(build_graph(features, config.metric, config.sigma), m);
    }
    return cluster_embedding(std::move(eigs), features.count(), features.height,
                             features.width, config);
}

SpectralResult spectral_cluster_graph(const WeightedGraph& graph,
                                      const SpectralConfig& config) {
    const int m = (config.eigenvectors > 0) ? config.eigenvectors : config.k;
    if (m < config.k) {
        throw DomainError("spectral_cluster: eigenvector count below k");
    }
    LaplacianEigs eigs = exact_eigs(graph, m);
    // graph nodes need not form an image; present them as one row
    return cluster_embedding(std::move(eigs), graph.nodes(), 1, graph.nodes(),
                             config);
}

std::vector<std::vector<double>> eigenvector_images(const LaplacianEigs& eigs,
                                                    int height, int width) {
    const int n = static_cast<int>(eigs.vectors.rows());
    if (n != height * width) {
        throw DomainError("eigenvector_images: H*W does not match node count");
    }
    std::vector<std::vector<double>> images;
    images.reserve(eigs.values.size());
    for (Eigen::Index k = 0; k < eigs.values.size(); ++k) {
        std::vector<double> img(n);
        double lo = eigs.vectors(0, k), hi = eigs.vectors(0, k);
        for (int i = 0; i < n; ++i) {
            lo = std::min(lo, eigs.vectors(i, k));
            hi = std::max(hi, eigs.vectors(i, k));
        }
        if (lo == hi) {
            std::fill(img.begin(), img.end(), 0.5);
        } else {
            const double scale = 1.0 / (hi - lo);
            for (int i = 0; i < n; ++i) {
                img[i] = std::clamp((eigs.vectors(i, k) - lo) * scale, 0.0, 1.0);
            }
        }
        images.push_back(std::move(img));
    }
    return images;
}

}  // namespace plumeseg
