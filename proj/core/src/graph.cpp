#include "plumeseg/graph.hpp"

#include <algorithm>
#include <cmath>

#include "plumeseg/errors.hpp"
#include "plumeseg/jacobi.hpp"
#include "plumeseg/parallel.hpp"
#include "plumeseg/rng.hpp"

namespace plumeseg {

Metric parse_metric(const std::string& name) {
    if (name == "cos" || name == "cosine") return Metric::Cosine;
    if (name == "euc" || name == "euclidean") return Metric::Euclidean;
    if (name == "mcos" || name == "modified-cosine") return Metric::ModifiedCosine;
    throw DomainError("unknown metric: " + name + " (use cos|euc|mcos)");
}

std::string metric_name(Metric metric) {
    switch (metric) {
        case Metric::Cosine: return "cos";
        case Metric::Euclidean: return "euc";
        case Metric::ModifiedCosine: return "mcos";
    }
    return "?";
}

FeatureImage features_from_frame(const HyperCube& cube, int t) {
    cube.validate();
    if (t < 0 || t >= cube.frames) {
        throw DomainError("features_from_frame: frame index out of range");
    }
    FeatureImage f;
    f.height = cube.height;
    f.width = cube.width;
    f.dim = cube.bands;
    const std::size_t n = static_cast<std::size_t>(f.height) * f.width;
    const std::size_t offset = cube.pixel_index(t, 0, 0) * cube.bands;
    f.data.assign(cube.data.begin() + offset,
                  cube.data.begin() + offset + n * cube.bands);
    return f;
}

FeatureImage features_from_scores(const ScoreVideo& scores, int t) {
    if (t < 0 || t >= scores.frames) {
        throw DomainError("features_from_scores: frame index out of range");
    }
    FeatureImage f;
    f.height = scores.height;
    f.width = scores.width;
    f.dim = scores.channels;
    const std::size_t n = static_cast<std::size_t>(f.height) * f.width;
    const std::size_t offset = scores.pixel_index(t, 0, 0) * scores.channels;
    f.data.assign(scores.data.begin() + offset,
                  scores.data.begin() + offset + n * scores.channels);
    return f;
}

FeatureImage features_from_falsecolor(const FalseColorVideo& video, int t) {
    if (t < 0 || t >= video.frames) {
        throw DomainError("features_from_falsecolor: frame index out of range");
    }
    FeatureImage f;
    f.height = video.height;
    f.width = video.width;
    f.dim = 3;
    const std::size_t n = static_cast<std::size_t>(f.height) * f.width;
    const std::size_t offset = video.pixel_index(t, 0, 0) * 3;
    f.data.assign(video.data.begin() + offset, video.data.begin() + offset + n * 3);
    return f;
}

FeatureImage build_features(const FeatureImage& raw) {
    FeatureImage out;
    out.height = raw.height;
    out.width = raw.width;
    out.dim = raw.dim * 9;
    out.data.resize(static_cast<std::size_t>(out.count()) * out.dim);
    for (int h = 0; h < raw.height; ++h) {
        for (int w = 0; w < raw.width; ++w) {
            double* dst =
                out.data.data() +
                (static_cast<std::size_t>(h) * raw.width + w) * out.dim;
            for (int dh = -1; dh <= 1; ++dh) {
                for (int dw = -1; dw <= 1; ++dw) {
                    const int hh = std::clamp(h + dh, 0, raw.height - 1);
                    const int ww = std::clamp(w + dw, 0, raw.width - 1);
                    const auto src = raw.feature(hh * raw.width + ww);
                    std::copy(src.begin(), src.end(), dst);
                    dst += raw.dim;
                }
            }
        }
    }
    return out;
}

namespace {

double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

}  // namespace

double cosine_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.empty()) {
        throw DomainError("cosine_distance: dimension mismatch");
    }
    // identical inputs short-circuit so the metric identity is exact
    if (std::equal(x.begin(), x.end(), y.begin())) {
        const double nx = dot(x, x);
        if (!(nx > 0.0)) throw DomainError("cosine_distance: zero vector");
        return 0.0;
    }
    const double nx = dot(x, x), ny = dot(y, y);
    if (!(nx > 0.0) || !(ny > 0.0)) {
        throw DomainError("cosine_distance: zero vector");
    }
    const double d = 1.0 - dot(x, y) / std::sqrt(nx * ny);
    return std::clamp(d, 0.0, 2.0);
}

double euclidean_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw DomainError("euclidean_distance: dimension mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double modified_cosine_distance(std::span<const double> x,
                                std::span<const double> y) {
    if (x.size() != y.size() || x.empty() || x.size() % 9 != 0) {
        throw DomainError(
            "modified_cosine_distance: needs matching dimensions divisible by 9");
    }
    const std::size_t block = x.size() / 9;
    double s = 0.0;
    for (int i = 0; i < 9; ++i) {
        const double d = cosine_distance(x.subspan(i * block, block),
                                         y.subspan(i * block, block));
        s += d * d;
    }
    return std::sqrt(s);
}

double metric_distance(Metric metric, std::span<const double> x,
                       std::span<const double> y) {
    switch (metric) {
        case Metric::Cosine: return cosine_distance(x, y);
        case Metric::Euclidean: return euclidean_distance(x, y);
        case Metric::ModifiedCosine: return modified_cosine_distance(x, y);
    }
    throw DomainError("metric_distance: bad metric");
}

namespace {

// cosine metrics need positive norms everywhere; report the pixel on failure
void check_metric_domain(const FeatureImage& f, Metric metric) {
    if (metric == Metric::Euclidean) return;
    if (metric == Metric::ModifiedCosine && f.dim % 9 != 0) {
        throw DomainError("modified-cosine requires feature dim divisible by 9 "
                          "(3x3 feature vectors), got dim " +
                          std::to_string(f.dim));
    }
    const int blocks = (metric == Metric::ModifiedCosine) ? 9 : 1;
    const int bs = f.dim / blocks;
    for (int i = 0; i < f.count(); ++i) {
        const auto x = f.feature(i);
        for (int blk = 0; blk < blocks; ++blk) {
            if (!(dot(x.subspan(blk * bs, bs), x.subspan(blk * bs, bs)) > 0.0)) {
                throw DomainError("zero-norm feature block at pixel " +
                                  std::to_string(i) + " (block " +
                                  std::to_string(blk) + ")");
            }
        }
    }
}

}  // namespace

WeightedGraph build_graph(const FeatureImage& features, Metric metric,
                          double sigma) {
    if (!(sigma > 0.0)) {
        throw DomainError("build_graph: sigma must be positive");
    }
    const int n = features.count();
    if (n < 1) throw DomainError("build_graph: empty feature image");
    check_metric_domain(features, metric);

    WeightedGraph g;
    g.weights.resize(n, n);
    const double inv_s2 = 1.0 / (sigma * sigma);
    // row i owns entries (i,j) and (j,i) for j > i, so rows are disjoint
    parallel_for(0, n, [&](int i) {
        g.weights(i, i) = 1.0;
        const auto xi = features.feature(i);
        for (int j = i + 1; j < n; ++j) {
            const double d = metric_distance(metric, xi, features.feature(j));
            const double w = std::exp(-d * d * inv_s2);
            g.weights(i, j) = w;
            g.weights(j, i) = w;
        }
    });
    g.degree = g.weights.rowwise().sum();
    return g;
}

WeightedGraph graph_from_weights(Eigen::MatrixXd weights) {
    const Eigen::Index n = weights.rows();
    if (n == 0 || weights.cols() != n) {
        throw DomainError("graph_from_weights: matrix must be square");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (weights(i, i) != 1.0) {
            throw DomainError("graph_from_weights: diagonal must be 1 at node " +
                              std::to_string(i));
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            const double w = weights(i, j);
            if (!(w >= 0.0 && w <= 1.0)) {
                throw DomainError("graph_from_weights: weight outside [0,1]");
            }
            if (w != weights(j, i)) {
                throw DomainError("graph_from_weights: matrix not symmetric");
            }
        }
    }
    WeightedGraph g;
    g.weights = std::move(weights);
    g.degree = g.weights.rowwise().sum();
    return g;
}

Eigen::MatrixXd symmetric_laplacian(const WeightedGraph& graph) {
    const int n = graph.nodes();
    for (int i = 0; i < n; ++i) {
        if (!(graph.degree[i] > 0.0)) {
            throw DomainError("symmetric_laplacian: non-positive degree at node " +
                              std::to_string(i));
        }
    }
    const Eigen::VectorXd dinv = graph.degree.array().rsqrt();
    Eigen::MatrixXd lap(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double v = -graph.weights(i, j) * dinv[i] * dinv[j];
            lap(i, j) = v;
            lap(j, i) = v;
        }
        lap(i, i) += 1.0;
    }
    return lap;
}

namespace {

void clamp_spectrum(Eigen::VectorXd& values, double tolerance) {
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values[i] < 0.0) {
            if (values[i] < -tolerance) {
                throw DomainError("laplacian eigenvalue " +
                                  std::to_string(values[i]) + " below 0");
            }
            values[i] = 0.0;
        } else if (values[i] > 2.0) {
            if (values[i] > 2.0 + tolerance) {
                throw DomainError("laplacian eigenvalue " +
                                  std::to_string(values[i]) + " above 2");
            }
            values[i] = 2.0;
        }
    }
}

}  // namespace

LaplacianEigs exact_eigs(const Eigen::MatrixXd& laplacian, int m) {
    const Eigen::Index n = laplacian.rows();
    if (n == 0 || laplacian.cols() != n) {
        throw DomainError("exact_eigs: matrix must be square");
    }
    if (m < 1 || m > n) {
        throw DomainError("exact_eigs: m must be in [1, n]");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (std::abs(laplacian(i, j) - laplacian(j, i)) > 1e-10) {
                throw DomainError("exact_eigs: input not symmetric at (" +
                                  std::to_string(i) + "," + std::to_string(j) +
                                  ")");
            }
        }
    }
    SymEig eig = jacobi_eigensymm(laplacian);
    LaplacianEigs out;
    out.nystrom = false;
    out.values = eig.values.head(m);
    out.vectors = eig.vectors.leftCols(m);
    clamp_spectrum(out.values, 1e-9);
    apply_sign_convention(out.vectors);
    return out;
}

LaplacianEigs exact_eigs(const WeightedGraph& graph, int m) {
    return exact_eigs(symmetric_laplacian(graph), m);
}

LaplacianEigs nystrom_eigs(const FeatureImage& features, Metric metric,
                           double sigma, int landmarks, int m,
                           std::uint64_t seed) {
    const int n = features.count();
    if (m < 1 || m > landmarks || landmarks > n) {
        throw DomainError("nystrom_eigs: need 1 <= m <= landmarks <= pixels");
    }
    if (!(sigma > 0.0)) {
        throw DomainError("nystrom_eigs: sigma must be positive");
    }
    check_metric_domain(features, metric);

    const std::vector<int> land = sample_without_replacement(n, landmarks, seed);
    std::vector<int> rest;
    rest.reserve(n - landmarks);
    {
        std::vector<std::uint8_t> is_land(n, 0);
        for (int i : land) is_land[i] = 1;
        for (int i = 0; i < n; ++i) {
            if (!is_land[i]) rest.push_back(i);
        }
    }
    const int nl = landmarks, nr = n - landmarks;
    const double inv_s2 = 1.0 / (sigma * sigma);
    auto sim = [&](int i, int j) {
        if (i == j) return 1.0;
        const double d =
            metric_distance(metric, features.feature(i), features.feature(j));
        return std::exp(-d * d * inv_s2);
    };

    Eigen::MatrixXd a(nl, nl);
    parallel_for(0, nl, [&](int i) {
        a(i, i) = 1.0;
        for (int j = i + 1; j < nl; ++j) {
            const double w = sim(land[i], land[j]);
            a(i, j) = w;
            a(j, i) = w;
        }
    });
    Eigen::MatrixXd c(nl, nr);
    parallel_for(0, nl, [&](int i) {
        for (int j = 0; j < nr; ++j) c(i, j) = sim(land[i], rest[j]);
    });

    auto spd_inverse_power = [](const Eigen::MatrixXd& mat, double power,
                                const char* what) {
        SymEig eig = jacobi_eigensymm(mat);
        const double lmax = eig.values[eig.values.size() - 1];
        const double lmin = eig.values[0];
        if (!(lmin > 0.0) || lmax / lmin > 1e12) {
            throw DomainError(std::string(what) +
                              " is numerically singular; use more or different "
                              "landmarks");
        }
        Eigen::VectorXd powered(eig.values.size());
        for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
            powered[k] = std::pow(eig.values[k], power);
        }
        return Eigen::MatrixXd(eig.vectors * powered.asDiagonal() *
                               eig.vectors.transpose());
    };

    // approximate degrees of the completed graph
    const Eigen::VectorXd c_rows = c.rowwise().sum();
    const Eigen::MatrixXd a_inv = spd_inverse_power(a, -1.0, "landmark block");
    const Eigen::VectorXd d1 = a.rowwise().sum() + c_rows;
    Eigen::VectorXd d2;
    if (nr > 0) {
        d2 = c.colwise().sum().transpose() + c.transpose() * (a_inv * c_rows);
    } else {
        d2.resize(0);
    }
    for (Eigen::Index i = 0; i < d1.size(); ++i) {
        if (!(d1[i] > 0.0)) {
            throw DomainError("nystrom_eigs: non-positive approximate degree; "
                              "graph too sparse for the landmark sample");
        }
    }
    for (Eigen::Index i = 0; i < d2.size(); ++i) {
        if (!(d2[i] > 0.0)) {
            throw DomainError("nystrom_eigs: non-positive approximate degree; "
                              "graph too sparse for the landmark sample");
        }
    }

    const Eigen::VectorXd s1 = d1.array().rsqrt();
    const Eigen::VectorXd s2 = d2.array().rsqrt();
    Eigen::MatrixXd an = s1.asDiagonal() * a * s1.asDiagonal();
    an = 0.5 * (an + an.transpose());
    Eigen::MatrixXd cn = s1.asDiagonal() * c * s2.asDiagonal();

    const Eigen::MatrixXd an_isqrt =
        spd_inverse_power(an, -0.5, "normalized landmark block");
    Eigen::MatrixXd q = an + an_isqrt * (cn * cn.transpose()) * an_isqrt;
    q = 0.5 * (q + q.transpose());
    SymEig eig_q = jacobi_eigensymm(q);  // ascending

    LaplacianEigs out;
    out.nystrom = true;
    out.values.resize(m);
    Eigen::MatrixXd u_top(nl, m);
    for (int k = 0; k < m; ++k) {
        const Eigen::Index src = nl - 1 - k;  // descending in N eigenvalue
        const double lam_n = eig_q.values[src];
        if (!(lam_n > 1e-12)) {
            throw DomainError("nystrom_eigs: landmark block supports fewer than "
                              "the requested number of eigenpairs");
        }
        out.values[k] = 1.0 - lam_n;
        u_top.col(k) = eig_q.vectors.col(src) / std::sqrt(lam_n);
    }

    // rows: landmarks first, then the rest; scatter back to pixel order
    Eigen::MatrixXd proj = an_isqrt * u_top;  // nl x m
    Eigen::MatrixXd v_land = an * proj;
    Eigen::MatrixXd v_rest = cn.transpose() * proj;

    out.vectors.resize(n, m);
    for (int i = 0; i < nl; ++i) out.vectors.row(land[i]) = v_land.row(i);
    for (int j = 0; j < nr; ++j) out.vectors.row(rest[j]) = v_rest.row(j);
    for (int k = 0; k < m; ++k) {
        const double norm = out.vectors.col(k).norm();
        if (norm > 0.0) out.vectors.col(k) /= norm;
    }
    clamp_spectrum(out.values, 1e-1);
    apply_sign_convention(out.vectors);
    return out;
}

}  // namespace plumeseg
