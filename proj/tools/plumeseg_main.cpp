// plumeseg command line: every pipeline stage as a subcommand plus the
// chained `pipeline` runner. See README.md for the workflow.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plumeseg/amsd.hpp"
#include "plumeseg/cluster.hpp"
#include "plumeseg/dimred.hpp"
#include "plumeseg/errors.hpp"
#include "plumeseg/graph.hpp"
#include "plumeseg/io.hpp"
#include "plumeseg/mbo.hpp"
#include "plumeseg/midway.hpp"
#include "plumeseg/pipeline.hpp"
#include "plumeseg/radiometry.hpp"
#include "plumeseg/synth.hpp"

namespace fs = std::filesystem;
using namespace plumeseg;

namespace {

std::pair<int, int> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        throw DomainError("expected a..b frame range, got: " + text);
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
}

std::vector<double> read_signature(const fs::path& path) {
    std::vector<double> values;
    std::string token;
    for (char ch : read_text_file(path)) {
        if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') {
            if (!token.empty()) {
                values.push_back(std::stod(token));
                token.clear();
            }
        } else {
            token.push_back(ch);
        }
    }
    if (!token.empty()) values.push_back(std::stod(token));
    return values;
}

FeatureImage load_frame_features(const fs::path& cube_path, int frame,
                                 const std::string& feature_mode) {
    const HyperCube cube = read_cube(cube_path);
    FeatureImage raw = features_from_frame(cube, frame);
    if (feature_mode == "3x3") return build_features(raw);
    if (feature_mode == "raw") return raw;
    throw DomainError("--features must be raw or 3x3");
}

void write_labels_and_overlay(const Labeling& labels, const fs::path& csv,
                              const fs::path& overlay) {
    emit_labeling_csv(labels, csv);
    static const std::vector<std::array<std::uint8_t, 3>> palette = {
        {{230, 25, 75}},  {{60, 180, 75}},   {{255, 225, 25}}, {{0, 130, 200}},
        {{245, 130, 48}}, {{145, 30, 180}},  {{70, 240, 240}}, {{240, 50, 230}},
        {{210, 245, 60}}, {{250, 190, 212}}, {{0, 128, 128}},  {{220, 190, 255}},
        {{170, 110, 40}}, {{255, 250, 200}}, {{128, 0, 0}},    {{128, 128, 128}}};
    std::vector<double> rgb(static_cast<std::size_t>(labels.height) *
                            labels.width * 3);
    for (std::size_t i = 0; i < labels.labels.size(); ++i) {
        const auto& color = palette[labels.labels[i] % palette.size()];
        for (int c = 0; c < 3; ++c) rgb[i * 3 + c] = color[c] / 255.0;
    }
    emit_image(rgb, labels.height, labels.width, 3, overlay);
}

void write_eigs_csv(const LaplacianEigs& eigs, const fs::path& path) {
    std::string csv = "index,eigenvalue\n";
    char buf[96];
    for (Eigen::Index i = 0; i < eigs.values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%lld,%.17g\n",
                      static_cast<long long>(i + 1), eigs.values[i]);
        csv += buf;
    }
    write_text_file(path, csv);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperspectral plume segmentation toolkit"};
    app.require_subcommand(1);

    // ---- synth ----------------------------------------------------------
    auto* synth = app.add_subcommand(
        "synth", "generate a synthetic LWIR scene with ground truth");
    std::string synth_config;
    std::string synth_out = "out";
    std::uint64_t synth_seed = 1;
    synth->add_option("--config", synth_config, "scene config file");
    synth->add_option("--seed", synth_seed, "random seed");
    synth->add_option("-o,--out-dir", synth_out, "output directory");

    // ---- convert --------------------------------------------------------
    auto* convert = app.add_subcommand(
        "convert", "radiance to emissivity with outlier cleaning");
    double convert_temp = 300.0;
    std::string convert_in, convert_out;
    convert->add_option("--temp-k", convert_temp, "assumed scene temperature");
    convert->add_option("input", convert_in, "radiance .hsc")->required();
    convert->add_option("output", convert_out, "emissivity .hsc")->required();

    // ---- amsd -----------------------------------------------------------
    auto* amsd_cmd = app.add_subcommand(
        "amsd", "adaptive matched subspace detector benchmark");
    std::string amsd_target, amsd_pre = "0..1", amsd_in, amsd_out, amsd_stat;
    double amsd_quantile = 0.999;
    int amsd_frame = -1, amsd_pb = 3;
    amsd_cmd->add_option("--target", amsd_target, "target signature CSV")
        ->required();
    amsd_cmd->add_option("--pre-frames", amsd_pre,
                         "target-free frame range a..b");
    amsd_cmd->add_option("--threshold-quantile", amsd_quantile,
                         "background statistic quantile for l0");
    amsd_cmd->add_option("--frame", amsd_frame, "detection frame (default last)");
    amsd_cmd->add_option("--p-b", amsd_pb, "background subspace dimension");
    amsd_cmd->add_option("--statistic", amsd_stat, "optional statistic PGM");
    amsd_cmd->add_option("input", amsd_in, "emissivity .hsc")->required();
    amsd_cmd->add_option("output", amsd_out, "detection mask PGM")->required();

    // ---- pca ------------------------------------------------------------
    auto* pca_cmd = app.add_subcommand("pca", "fit PCA and write false color");
    int pca_k = 5;
    std::string pca_select = "1,3,5";
    bool pca_uncentered = false;
    std::string pca_in, pca_scores, pca_rgb;
    pca_cmd->add_option("-k,--components", pca_k, "component count");
    pca_cmd->add_option("--select", pca_select, "1-based R,G,B components");
    pca_cmd->add_flag("--uncentered", pca_uncentered,
                      "skip mean-centering before the covariance");
    pca_cmd->add_option("input", pca_in, "emissivity .hsc")->required();
    pca_cmd->add_option("scores", pca_scores, "output scores .hsc")->required();
    pca_cmd->add_option("rgb", pca_rgb, "false-color pattern rgb_%04d.ppm")
        ->required();

    // ---- midway ---------------------------------------------------------
    auto* midway_cmd =
        app.add_subcommand("midway", "midway histogram equalization");
    std::string midway_in, midway_out;
    int midway_levels = kMidwayQuantileLevels;
    midway_cmd->add_option("--levels", midway_levels, "quantile grid size");
    midway_cmd->add_option("input", midway_in, "input pattern in_%04d.ppm")
        ->required();
    midway_cmd->add_option("output", midway_out, "output pattern out_%04d.ppm")
        ->required();

    // ---- kmeans ---------------------------------------------------------
    auto* kmeans_cmd = app.add_subcommand("kmeans", "k-means clustering");
    int km_k = 0, km_frame = 0;
    std::string km_metric = "mcos", km_features = "3x3";
    std::uint64_t km_seed = 1;
    std::string km_in, km_csv, km_overlay;
    kmeans_cmd->add_option("-k", km_k, "cluster count")->required();
    kmeans_cmd->add_option("--metric", km_metric, "cos|euc|mcos");
    kmeans_cmd->add_option("--features", km_features, "raw|3x3");
    kmeans_cmd->add_option("--frame", km_frame, "frame index");
    kmeans_cmd->add_option("--seed", km_seed, "centroid seed");
    kmeans_cmd->add_option("input", km_in, "cube .hsc")->required();
    kmeans_cmd->add_option("labels", km_csv, "labels CSV")->required();
    kmeans_cmd->add_option("overlay", km_overlay, "label overlay PPM")->required();

    // ---- spectral -------------------------------------------------------
    auto* spectral_cmd =
        app.add_subcommand("spectral", "spectral clustering");
    int sp_k = 0, sp_eigs = 0, sp_frame = 0, sp_nystrom = 0;
    double sp_sigma = 1.0;
    std::string sp_metric = "mcos", sp_features = "3x3", sp_eigvec;
    std::uint64_t sp_seed = 1;
    std::string sp_in, sp_csv, sp_overlay;
    spectral_cmd->add_option("-k", sp_k, "cluster count")->required();
    spectral_cmd->add_option("--eigs", sp_eigs, "eigenvector count (default k)");
    spectral_cmd->add_option("--nystrom", sp_nystrom,
                             "landmark count (0 = exact dense)");
    spectral_cmd->add_option("--metric", sp_metric, "cos|euc|mcos");
    spectral_cmd->add_option("--sigma", sp_sigma, "similarity bandwidth");
    spectral_cmd->add_option("--features", sp_features, "raw|3x3");
    spectral_cmd->add_option("--frame", sp_frame, "frame index");
    spectral_cmd->add_option("--seed", sp_seed, "sampling / k-means seed");
    spectral_cmd->add_option("--eigvec", sp_eigvec,
                             "eigenvector image pattern eig_%02d.pgm");
    spectral_cmd->add_option("input", sp_in, "cube .hsc")->required();
    spectral_cmd->add_option("labels", sp_csv, "labels CSV")->required();
    spectral_cmd->add_option("overlay", sp_overlay, "label overlay PPM")
        ->required();

    // ---- mbo ------------------------------------------------------------
    auto* mbo_cmd = app.add_subcommand(
        "mbo", "semi-supervised plume segmentation over a video");
    std::string mbo_frames, mbo_trace;
    double mbo_c1 = 30.0, mbo_dt = 0.1, mbo_sigma = 1.0, mbo_quantile = 0.91;
    int mbo_eigs = 100, mbo_nystrom = 300, mbo_inner = 3, mbo_max = 100;
    std::string mbo_metric = "cos";
    std::uint64_t mbo_seed = 1;
    std::string mbo_in, mbo_out;
    mbo_cmd->add_option("--frames", mbo_frames, "frame range 0..T");
    mbo_cmd->add_option("--c1", mbo_c1, "fidelity strength");
    mbo_cmd->add_option("--dt", mbo_dt, "diffusion time step");
    mbo_cmd->add_option("--inner-steps", mbo_inner, "diffusion substeps");
    mbo_cmd->add_option("--max-iters", mbo_max, "outer iteration cap");
    mbo_cmd->add_option("--eigs", mbo_eigs, "eigenpair count");
    mbo_cmd->add_option("--nystrom", mbo_nystrom,
                        "landmark count (0 = exact dense)");
    mbo_cmd->add_option("--metric", mbo_metric, "cos|euc (per-pixel spectra)");
    mbo_cmd->add_option("--sigma", mbo_sigma, "similarity bandwidth");
    mbo_cmd->add_option("--quantile", mbo_quantile,
                        "background-subtraction threshold quantile");
    mbo_cmd->add_option("--seed", mbo_seed, "landmark seed");
    mbo_cmd->add_option("--trace", mbo_trace, "Ginzburg-Landau energy CSV");
    mbo_cmd->add_option("input", mbo_in, "scores .hsc")->required();
    mbo_cmd->add_option("output", mbo_out, "mask pattern masks_%04d.pgm")
        ->required();

    // ---- graph-eigs -----------------------------------------------------
    auto* ge_cmd = app.add_subcommand(
        "graph-eigs", "diagnostic Laplacian eigenvalue dump");
    std::string ge_metric = "mcos", ge_features = "3x3";
    double ge_sigma = 1.0;
    int ge_nystrom = 0, ge_m = 15, ge_frame = 0;
    std::uint64_t ge_seed = 1;
    std::string ge_in, ge_out;
    ge_cmd->add_option("--metric", ge_metric, "cos|euc|mcos");
    ge_cmd->add_option("--sigma", ge_sigma, "similarity bandwidth");
    ge_cmd->add_option("--nystrom", ge_nystrom, "landmark count (0 = exact)");
    ge_cmd->add_option("--eigs", ge_m, "eigenpair count");
    ge_cmd->add_option("--frame", ge_frame, "frame index");
    ge_cmd->add_option("--features", ge_features, "raw|3x3");
    ge_cmd->add_option("--seed", ge_seed, "landmark seed");
    ge_cmd->add_option("input", ge_in, "cube .hsc")->required();
    ge_cmd->add_option("output", ge_out, "eigenvalue CSV")->required();

    // ---- pipeline -------------------------------------------------------
    auto* pipe_cmd = app.add_subcommand(
        "pipeline", "run chained stages from a key=value config");
    std::string pipe_config;
    std::vector<std::string> pipe_sets;
    pipe_cmd->add_option("config", pipe_config, "pipeline config file")
        ->required();
    pipe_cmd->add_option("--set", pipe_sets, "key=value overrides");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*synth) {
            SceneSpec spec = synth_config.empty()
                                 ? default_scene()
                                 : parse_scene_config(read_text_file(synth_config));
            spec.seed = synth_seed;
            const fs::path out(synth_out);
            fs::create_directories(out);
            SynthResult result = generate(spec);
            write_cube(result.cube, out / "radiance.hsc");
            write_text_file(out / "scene.txt", scene_config_text(spec));
            for (int t = 0; t < result.truth.frames; ++t) {
                emit_mask(result.truth.frame_mask(t), result.truth.height,
                          result.truth.width,
                          out / format_indexed_path("truth_%04d.pgm", t));
            }
            std::string sig;
            char buf[64];
            for (double v : result.truth.target_signature) {
                std::snprintf(buf, sizeof buf, "%.17g\n", v);
                sig += buf;
            }
            write_text_file(out / "target_signature.csv", sig);
            std::cout << "synth: wrote " << result.truth.frames
                      << " frames to " << out.string() << "\n";
        } else if (*convert) {
            const HyperCube radiance = read_cube(convert_in);
            EmissivityResult res = radiance_to_emissivity(radiance, convert_temp);
            std::cout << "convert: " << res.outlier_count
                      << " outlier pixels flagged\n";
            write_cube(spectral_median_filter_3x3(res), convert_out);
        } else if (*amsd_cmd) {
            const HyperCube cube = read_cube(amsd_in);
            const std::vector<double> target = read_signature(amsd_target);
            if (static_cast<int>(target.size()) != cube.bands) {
                throw DomainError("target signature band count mismatch");
            }
            const auto [pre_begin, pre_end] = parse_range(amsd_pre);
            Eigen::MatrixXd background =
                estimate_background(slice_frames(cube, pre_begin, pre_end), amsd_pb);
            Eigen::MatrixXd target_mat(cube.bands, 1);
            for (int b = 0; b < cube.bands; ++b) target_mat(b, 0) = target[b];
            SubspaceModel model(target_mat, background);
            std::vector<double> pooled =
                pooled_statistics(cube, pre_begin, pre_end, model);
            std::sort(pooled.begin(), pooled.end());
            const double l0 = pooled[static_cast<std::size_t>(
                std::lround(amsd_quantile * (pooled.size() - 1)))];
            const int frame = (amsd_frame < 0) ? cube.frames - 1 : amsd_frame;
            DetectionMap map = detect(cube, frame, model, l0);
            emit_mask(map.mask, map.height, map.width, amsd_out);
            if (!amsd_stat.empty()) {
                double lo = 0.0, hi = 0.0;
                bool first = true;
                for (double s : map.statistic) {
                    if (!std::isfinite(s)) continue;
                    if (first) {
                        lo = hi = s;
                        first = false;
                    } else {
                        lo = std::min(lo, s);
                        hi = std::max(hi, s);
                    }
                }
                std::vector<double> img(map.statistic.size(), 1.0);
                for (std::size_t i = 0; i < img.size(); ++i) {
                    if (std::isfinite(map.statistic[i])) {
                        img[i] = (hi > lo) ? (map.statistic[i] - lo) / (hi - lo)
                                           : 0.5;
                    }
                }
                emit_image(img, map.height, map.width, 1, amsd_stat);
            }
            std::cout << "amsd: threshold " << l0 << ", frame " << frame << "\n";
        } else if (*pca_cmd) {
            const HyperCube cube = read_cube(pca_in);
            PcaModel model = fit_pca(cube, pca_k, !pca_uncentered);
            ScoreVideo scores = project(cube, model);
            write_cube(scores_to_cube(scores), pca_scores);
            ComponentSelection sel;
            std::stringstream ss(pca_select);
            std::string tok;
            int i = 0;
            while (std::getline(ss, tok, ',') && i < 3) {
                sel.indices[i++] = std::stoi(tok);
            }
            if (i != 3) {
                throw DomainError("--select needs three component indices");
            }
            FalseColorVideo video = false_color(scores, sel);
            for (int t = 0; t < video.frames; ++t) {
                emit_frame(video, t, format_indexed_path(pca_rgb, t));
            }
        } else if (*midway_cmd) {
            // load the numbered PPM sequence
            std::vector<ImageU8> frames;
            for (int t = 0;; ++t) {
                const fs::path p = format_indexed_path(midway_in, t);
                if (!fs::exists(p)) break;
                frames.push_back(read_netpbm(p));
            }
            if (frames.empty()) {
                throw IoError("no frames matched pattern " + midway_in);
            }
            FalseColorVideo video;
            video.frames = static_cast<int>(frames.size());
            video.height = frames[0].height;
            video.width = frames[0].width;
            video.data.resize(static_cast<std::size_t>(video.frames) *
                              video.height * video.width * 3);
            for (int t = 0; t < video.frames; ++t) {
                const ImageU8& img = frames[t];
                if (img.channels != 3 || img.height != video.height ||
                    img.width != video.width) {
                    throw DomainError("frame " + std::to_string(t) +
                                      " is not an RGB frame of matching size");
                }
                for (std::size_t i = 0; i < img.pixels.size(); ++i) {
                    video.data[static_cast<std::size_t>(t) * img.pixels.size() +
                               i] = img.pixels[i] / 255.0;
                }
            }
            video = midway_equalize(video, midway_levels);
            for (int t = 0; t < video.frames; ++t) {
                emit_frame(video, t, format_indexed_path(midway_out, t));
            }
        } else if (*kmeans_cmd) {
            KMeansConfig cfg;
            cfg.k = km_k;
            cfg.metric = parse_metric(km_metric);
            cfg.seed = km_seed;
            const FeatureImage features =
                load_frame_features(km_in, km_frame, km_features);
            KMeansResult result = kmeans(features, cfg);
            write_labels_and_overlay(result.labels, km_csv, km_overlay);
            std::cout << "kmeans: converged in " << result.iterations
                      << " iterations\n";
        } else if (*spectral_cmd) {
            SpectralConfig cfg;
            cfg.k = sp_k;
            cfg.eigenvectors = (sp_eigs > 0) ? sp_eigs : sp_k;
            cfg.metric = parse_metric(sp_metric);
            cfg.sigma = sp_sigma;
            cfg.kmeans_seed = sp_seed;
            const FeatureImage features =
                load_frame_features(sp_in, sp_frame, sp_features);
            if (sp_nystrom > 0) {
                cfg.eigs.use_nystrom = true;
                cfg.eigs.landmarks = std::min(sp_nystrom, features.count());
                cfg.eigs.seed = sp_seed;
            }
            SpectralResult result = spectral_cluster(features, cfg);
            write_labels_and_overlay(result.labels, sp_csv, sp_overlay);
            if (!sp_eigvec.empty()) {
                const auto images = eigenvector_images(result.eigs,
                                                       features.height,
                                                       features.width);
                for (std::size_t i = 0; i < images.size(); ++i) {
                    emit_image(images[i], features.height, features.width, 1,
                               format_indexed_path(sp_eigvec,
                                                   static_cast<int>(i)));
                }
            }
        } else if (*mbo_cmd) {
            MboConfig cfg;
            cfg.fidelity_strength = mbo_c1;
            cfg.dt = mbo_dt;
            cfg.inner_steps = mbo_inner;
            cfg.max_outer_iters = mbo_max;
            cfg.eigenpairs = mbo_eigs;
            cfg.metric = parse_metric(mbo_metric);
            cfg.sigma = mbo_sigma;
            cfg.init_quantile = mbo_quantile;
            cfg.eigs.use_nystrom = mbo_nystrom > 0;
            cfg.eigs.landmarks = mbo_nystrom;
            cfg.eigs.seed = mbo_seed;

            ScoreVideo video = cube_to_scores(read_cube(mbo_in));
            if (!mbo_frames.empty()) {
                const auto [begin, end] = parse_range(mbo_frames);
                if (begin != 0) {
                    throw DomainError("--frames must start at 0");
                }
                if (end < video.frames) {
                    video.data.resize(static_cast<std::size_t>(end) *
                                      video.height * video.width *
                                      video.channels);
                    video.frames = end;
                }
            }
            const std::vector<MboResult> results =
                segment_video_detailed(video, cfg);
            std::string trace =
                "frame,iteration,dirichlet,potential,fidelity,total\n";
            char buf[192];
            for (std::size_t t = 0; t < results.size(); ++t) {
                std::vector<std::uint8_t> mask(results[t].phase.u.size());
                for (std::size_t i = 0; i < mask.size(); ++i) {
                    mask[i] = results[t].phase.u[i] > 0.0 ? 1 : 0;
                }
                emit_mask(mask, results[t].phase.height, results[t].phase.width,
                          format_indexed_path(mbo_out, static_cast<int>(t)));
                for (std::size_t j = 0; j < results[t].trace.size(); ++j) {
                    const GlEnergy& e = results[t].trace[j];
                    std::snprintf(buf, sizeof buf,
                                  "%zu,%zu,%.17g,%.17g,%.17g,%.17g\n", t, j + 1,
                                  e.dirichlet, e.potential, e.fidelity,
                                  e.total());
                    trace += buf;
                }
            }
            if (!mbo_trace.empty()) write_text_file(mbo_trace, trace);
        } else if (*ge_cmd) {
            const FeatureImage features =
                load_frame_features(ge_in, ge_frame, ge_features);
            const Metric metric = parse_metric(ge_metric);
            LaplacianEigs eigs;
            if (ge_nystrom > 0) {
                eigs = nystrom_eigs(features, metric, ge_sigma,
                                    std::min(ge_nystrom, features.count()), ge_m,
                                    ge_seed);
            } else {
                eigs = exact_eigs(build_graph(features, metric, ge_sigma), ge_m);
            }
            write_eigs_csv(eigs, ge_out);
        } else if (*pipe_cmd) {
            PipelineConfig cfg = PipelineConfig::from_file(pipe_config);
            for (const std::string& kv : pipe_sets) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) {
                    throw DomainError("--set expects key=value, got: " + kv);
                }
                cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
            }
            return run_pipeline(cfg, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
