#include "plumeseg/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "plumeseg/amsd.hpp"
#include "plumeseg/cluster.hpp"
#include "plumeseg/dimred.hpp"
#include "plumeseg/errors.hpp"
#include "plumeseg/io.hpp"
#include "plumeseg/mbo.hpp"
#include "plumeseg/midway.hpp"
#include "plumeseg/radiometry.hpp"
#include "plumeseg/synth.hpp"

namespace plumeseg {

namespace {

const std::vector<std::string> kStageOrder = {
    "synth", "convert", "pca", "midway", "amsd", "kmeans", "spectral", "mbo"};

const std::set<std::string> kKnownKeys = {
    "stages", "out_dir", "seed",
    "input.radiance", "input.emissivity", "input.scores",
    "synth.scene_config", "synth.frames", "synth.height", "synth.width",
    "synth.bands", "synth.noise_std", "synth.release_frame",
    "convert.temp_k",
    "pca.components", "pca.select", "pca.centered",
    "midway.levels",
    "amsd.p_b", "amsd.threshold_quantile", "amsd.frame", "amsd.target",
    "amsd.pre_frames",
    "kmeans.k", "kmeans.metric", "kmeans.features", "kmeans.frame",
    "kmeans.input",
    "spectral.k", "spectral.eigenvectors", "spectral.metric", "spectral.sigma",
    "spectral.nystrom", "spectral.frame", "spectral.features", "spectral.input",
    "mbo.c1", "mbo.dt", "mbo.inner_steps", "mbo.max_iters", "mbo.eigenpairs",
    "mbo.nystrom", "mbo.metric", "mbo.sigma", "mbo.quantile", "mbo.input",
    "mbo.frames",
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
}

}  // namespace

PipelineConfig PipelineConfig::parse(const std::string& text) {
    PipelineConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw DomainError("pipeline config line " + std::to_string(lineno) +
                              " is not key = value");
        }
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
    return parse(read_text_file(path));
}

void PipelineConfig::set(const std::string& key, const std::string& value) {
    if (!kKnownKeys.count(key)) {
        throw DomainError("unknown pipeline config key: " + key);
    }
    values_[key] = value;
}

bool PipelineConfig::has(const std::string& key) const {
    return values_.count(key) != 0;
}

std::string PipelineConfig::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
        throw DomainError("pipeline config missing required key: " + key);
    }
    return it->second;
}

std::string PipelineConfig::get_or(const std::string& key,
                                   const std::string& fallback) const {
    auto it = values_.find(key);
    return (it == values_.end()) ? fallback : it->second;
}

int PipelineConfig::get_int(const std::string& key, int fallback) const {
    auto it = values_.find(key);
    return (it == values_.end()) ? fallback : std::stoi(it->second);
}

double PipelineConfig::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    return (it == values_.end()) ? fallback : std::stod(it->second);
}

bool PipelineConfig::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw DomainError("pipeline config key " + key + " must be true or false");
}

std::uint64_t PipelineConfig::seed() const {
    auto it = values_.find("seed");
    return (it == values_.end()) ? 0 : std::stoull(it->second);
}

std::vector<std::string> PipelineConfig::stages() const {
    const std::string listed = get_or("stages", "");
    if (listed.empty()) {
        throw DomainError("pipeline config needs a stages = ... list");
    }
    std::set<std::string> requested;
    std::stringstream ss(listed);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        if (std::find(kStageOrder.begin(), kStageOrder.end(), tok) ==
            kStageOrder.end()) {
            throw DomainError("unknown pipeline stage: " + tok);
        }
        requested.insert(tok);
    }
    std::vector<std::string> ordered;
    for (const auto& s : kStageOrder) {
        if (requested.count(s)) ordered.push_back(s);
    }
    return ordered;
}

std::filesystem::path PipelineConfig::out_dir() const {
    return get_or("out_dir", "out");
}

std::string report_timings(const std::vector<StageTiming>& timings) {
    std::string csv = "stage,seconds\n";
    char buf[128];
    for (const auto& t : timings) {
        std::snprintf(buf, sizeof buf, "%s,%.6f\n", t.stage.c_str(), t.seconds);
        csv += buf;
    }
    return csv;
}

namespace {

struct PipelineState {
    std::optional<SynthResult> synth;
    std::optional<HyperCube> radiance;
    std::optional<HyperCube> emissivity;
    std::optional<ScoreVideo> scores;
    std::optional<FalseColorVideo> falsecolor;  // post-midway when midway ran
    int release_frame = -1;
};

std::vector<std::array<std::uint8_t, 3>> label_palette() {
    return {{{230, 25, 75}},
            {{60, 180, 75}},
            {{255, 225, 25}},
            {{0, 130, 200}},
            {{245, 130, 48}},
            {{145, 30, 180}},
            {{70, 240, 240}},
            {{240, 50, 230}},
            {{210, 245, 60}},
            {{250, 190, 212}},
            {{0, 128, 128}},
            {{220, 190, 255}},
            {{170, 110, 40}},
            {{255, 250, 200}},
            {{128, 0, 0}},
            {{128, 128, 128}}};
}

void write_label_overlay(const Labeling& labels,
                         const std::filesystem::path& path) {
    const auto palette = label_palette();
    std::vector<double> rgb(static_cast<std::size_t>(labels.height) *
                            labels.width * 3);
    for (std::size_t i = 0; i < labels.labels.size(); ++i) {
        const auto& color = palette[labels.labels[i] % palette.size()];
        for (int c = 0; c < 3; ++c) rgb[i * 3 + c] = color[c] / 255.0;
    }
    emit_image(rgb, labels.height, labels.width, 3, path);
}

std::vector<double> parse_signature_csv(const std::string& text) {
    std::vector<double> values;
    std::string token;
    for (char ch : text) {
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

std::pair<int, int> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        throw DomainError("expected a..b frame range, got: " + text);
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
}

const HyperCube& need_emissivity(PipelineState& state,
                                 const PipelineConfig& cfg) {
    if (!state.emissivity) {
        if (cfg.has("input.emissivity")) {
            state.emissivity = read_cube(cfg.get("input.emissivity"));
        } else {
            throw DomainError("stage needs an emissivity cube: run convert or "
                              "set input.emissivity");
        }
    }
    return *state.emissivity;
}

const ScoreVideo& need_scores(PipelineState& state, const PipelineConfig& cfg) {
    if (!state.scores) {
        if (cfg.has("input.scores")) {
            state.scores = cube_to_scores(read_cube(cfg.get("input.scores")));
        } else {
            throw DomainError("stage needs PCA scores: run pca or set "
                              "input.scores");
        }
    }
    return *state.scores;
}

int clustering_frame(const PipelineConfig& cfg, const std::string& key,
                     const PipelineState& state, int frames) {
    // the writeup examines the third frame after release
    int frame = cfg.get_int(key, -1);
    if (frame < 0) {
        frame = (state.release_frame >= 0)
                    ? std::min(state.release_frame + 3, frames - 1)
                    : 0;
    }
    if (frame < 0 || frame >= frames) {
        throw DomainError(key + " outside the video");
    }
    return frame;
}

FeatureImage clustering_features(const PipelineConfig& cfg,
                                 const std::string& prefix,
                                 PipelineState& state, int frame) {
    const std::string input = cfg.get_or(prefix + ".input", "falsecolor");
    FeatureImage raw;
    if (input == "falsecolor") {
        if (!state.falsecolor) {
            throw DomainError(prefix + ".input = falsecolor needs the pca stage");
        }
        raw = features_from_falsecolor(*state.falsecolor, frame);
    } else if (input == "scores") {
        raw = features_from_scores(need_scores(state, cfg), frame);
    } else {
        throw DomainError(prefix + ".input must be falsecolor or scores");
    }
    const std::string features = cfg.get_or(prefix + ".features", "raw");
    if (features == "3x3") return build_features(raw);
    if (features == "raw") return raw;
    throw DomainError(prefix + ".features must be raw or 3x3");
}

void run_synth(const PipelineConfig& cfg, PipelineState& state,
               const std::filesystem::path& out) {
    SceneSpec spec;
    if (cfg.has("synth.scene_config")) {
        spec = parse_scene_config(read_text_file(cfg.get("synth.scene_config")));
    } else {
        spec = default_scene();
        spec.frames = cfg.get_int("synth.frames", spec.frames);
        spec.height = cfg.get_int("synth.height", spec.height);
        spec.width = cfg.get_int("synth.width", spec.width);
        spec.bands = cfg.get_int("synth.bands", spec.bands);
        spec.noise_std = cfg.get_double("synth.noise_std", spec.noise_std);
        spec.plume.release_frame =
            cfg.get_int("synth.release_frame", spec.plume.release_frame);
        if (spec.height != 32 || spec.width != 64) {
            // keep the three bands proportional when dimensions change
            spec.regions[0].polygon =
                rect_polygon(0, 0, spec.width, spec.height * 10 / 32);
            spec.regions[1].polygon =
                rect_polygon(0, spec.height * 10 / 32, spec.width,
                             spec.height * 20 / 32);
            spec.regions[2].polygon = rect_polygon(
                0, spec.height * 20 / 32, spec.width, spec.height);
            spec.plume.center_x = spec.width * 24.0 / 64.0;
            spec.plume.center_y = spec.height * 24.0 / 32.0;
        }
        if (spec.bands != 32) {
            const int b = spec.bands;
            spec.regions[0].emissivity = ramp_spectrum(b, 0.55, 0.65);
            spec.regions[1].emissivity = ramp_spectrum(b, 0.82, 0.74);
            spec.regions[2].emissivity = ramp_spectrum(b, 0.80, 0.888);
            spec.plume.emissivity = notch_spectrum(b, 0.85, 0.45, 0.45, 0.16);
        }
    }
    spec.seed = cfg.seed();

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

    state.release_frame = result.truth.release_frame;
    state.radiance = result.cube;
    state.synth = std::move(result);
}

void run_convert(const PipelineConfig& cfg, PipelineState& state,
                 const std::filesystem::path& out, std::ostream& log) {
    if (!state.radiance) {
        if (cfg.has("input.radiance")) {
            state.radiance = read_cube(cfg.get("input.radiance"));
        } else {
            throw DomainError("convert needs a radiance cube: run synth or set "
                              "input.radiance");
        }
    }
    const double temp_k = cfg.get_double("convert.temp_k", 300.0);
    EmissivityResult res = radiance_to_emissivity(*state.radiance, temp_k);
    log << "convert: " << res.outlier_count << " outlier pixels flagged\n";
    state.emissivity = spectral_median_filter_3x3(res);
    write_cube(*state.emissivity, out / "emissivity.hsc");
}

void run_pca(const PipelineConfig& cfg, PipelineState& state,
             const std::filesystem::path& out) {
    const HyperCube& cube = need_emissivity(state, cfg);
    const int k = cfg.get_int("pca.components", 5);
    const bool centered = cfg.get_bool("pca.centered", true);
    PcaModel model = fit_pca(cube, k, centered);

    std::string eigcsv = "index,eigenvalue\n";
    char buf[96];
    for (int j = 0; j < model.eigenvalues.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%d,%.17g\n", j + 1, model.eigenvalues[j]);
        eigcsv += buf;
    }
    write_text_file(out / "pca_eigenvalues.csv", eigcsv);

    state.scores = project(cube, model);
    write_cube(scores_to_cube(*state.scores), out / "scores.hsc");

    ComponentSelection sel;
    std::stringstream ss(cfg.get_or("pca.select", "1,3,5"));
    std::string tok;
    int i = 0;
    while (std::getline(ss, tok, ',') && i < 3) {
        sel.indices[i++] = std::stoi(tok);
    }
    if (i != 3) {
        throw DomainError("pca.select needs exactly three component indices");
    }
    state.falsecolor = false_color(*state.scores, sel);
    for (int t = 0; t < state.falsecolor->frames; ++t) {
        emit_frame(*state.falsecolor, t,
                   out / format_indexed_path("rgb_%04d.ppm", t));
    }
}

void run_midway(const PipelineConfig& cfg, PipelineState& state,
                const std::filesystem::path& out) {
    if (!state.falsecolor) {
        throw DomainError("midway needs the pca stage's false-color video");
    }
    const int levels = cfg.get_int("midway.levels", kMidwayQuantileLevels);
    state.falsecolor = midway_equalize(*state.falsecolor, levels);
    for (int t = 0; t < state.falsecolor->frames; ++t) {
        emit_frame(*state.falsecolor, t,
                   out / format_indexed_path("mid_%04d.ppm", t));
    }
}

void run_amsd(const PipelineConfig& cfg, PipelineState& state,
              const std::filesystem::path& out, std::ostream& log) {
    const HyperCube& cube = need_emissivity(state, cfg);

    std::vector<double> target;
    if (cfg.has("amsd.target")) {
        target = parse_signature_csv(read_text_file(cfg.get("amsd.target")));
    } else if (state.synth) {
        target = state.synth->truth.target_signature;
    } else {
        throw DomainError("amsd needs a target signature: run synth or set "
                          "amsd.target");
    }
    if (static_cast<int>(target.size()) != cube.bands) {
        throw DomainError("amsd target signature band count mismatch");
    }

    int pre_begin = 0, pre_end = state.release_frame;
    if (cfg.has("amsd.pre_frames")) {
        std::tie(pre_begin, pre_end) = parse_range(cfg.get("amsd.pre_frames"));
    }
    if (pre_end <= pre_begin) {
        throw DomainError("amsd needs pre-release frames (amsd.pre_frames)");
    }

    const int p_b = cfg.get_int("amsd.p_b", 3);
    const HyperCube pre = slice_frames(cube, pre_begin, pre_end);
    Eigen::MatrixXd background = estimate_background(pre, p_b);
    Eigen::MatrixXd target_mat(cube.bands, 1);
    for (int b = 0; b < cube.bands; ++b) target_mat(b, 0) = target[b];
    SubspaceModel model(target_mat, background);

    const double quantile = cfg.get_double("amsd.threshold_quantile", 0.999);
    std::vector<double> pooled = pooled_statistics(cube, pre_begin, pre_end, model);
    std::sort(pooled.begin(), pooled.end());
    const double l0 = pooled[static_cast<std::size_t>(
        std::lround(quantile * (pooled.size() - 1)))];
    log << "amsd: threshold " << l0 << " at background quantile " << quantile
        << "\n";

    const int frame = clustering_frame(cfg, "amsd.frame", state, cube.frames);
    DetectionMap map = detect(cube, frame, model, l0);

    // statistic image: min-max over finite values, +inf rendered white
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
    std::vector<double> stat_img(map.statistic.size(), 1.0);
    for (std::size_t i = 0; i < map.statistic.size(); ++i) {
        const double s = map.statistic[i];
        if (std::isfinite(s)) {
            stat_img[i] = (hi > lo) ? (s - lo) / (hi - lo) : 0.5;
        }
    }
    emit_image(stat_img, map.height, map.width, 1, out / "amsd_stat.pgm");
    emit_mask(map.mask, map.height, map.width, out / "amsd_mask.pgm");
}

void run_kmeans(const PipelineConfig& cfg, PipelineState& state,
                const std::filesystem::path& out) {
    KMeansConfig km;
    km.k = std::stoi(cfg.get("kmeans.k"));
    km.metric = parse_metric(cfg.get_or("kmeans.metric", "mcos"));
    km.seed = cfg.seed();
    const int frames = state.falsecolor ? state.falsecolor->frames
                                        : need_scores(state, cfg).frames;
    const int frame = clustering_frame(cfg, "kmeans.frame", state, frames);
    const FeatureImage features = clustering_features(cfg, "kmeans", state, frame);
    KMeansResult result = kmeans(features, km);
    emit_labeling_csv(result.labels, out / "kmeans_labels.csv");
    write_label_overlay(result.labels, out / "kmeans_overlay.ppm");
}

void run_spectral(const PipelineConfig& cfg, PipelineState& state,
                  const std::filesystem::path& out) {
    SpectralConfig sc;
    sc.k = std::stoi(cfg.get("spectral.k"));
    sc.eigenvectors = cfg.get_int("spectral.eigenvectors", sc.k);
    sc.metric = parse_metric(cfg.get_or("spectral.metric", "mcos"));
    sc.sigma = cfg.get_double("spectral.sigma", 1.0);
    sc.kmeans_seed = cfg.seed();
    const int landmarks = cfg.get_int("spectral.nystrom", 300);
    const int frames = state.falsecolor ? state.falsecolor->frames
                                        : need_scores(state, cfg).frames;
    const int frame = clustering_frame(cfg, "spectral.frame", state, frames);
    const FeatureImage features =
        clustering_features(cfg, "spectral", state, frame);
    if (landmarks > 0) {
        sc.eigs.use_nystrom = true;
        sc.eigs.landmarks = std::min(landmarks, features.count());
        sc.eigs.seed = cfg.seed();
    }
    SpectralResult result = spectral_cluster(features, sc);
    emit_labeling_csv(result.labels, out / "spectral_labels.csv");
    write_label_overlay(result.labels, out / "spectral_overlay.ppm");
    const auto images =
        eigenvector_images(result.eigs, features.height, features.width);
    for (std::size_t i = 0; i < images.size(); ++i) {
        emit_image(images[i], features.height, features.width, 1,
                   out / format_indexed_path("eig_%02d.pgm", static_cast<int>(i)));
    }
}

void run_mbo(const PipelineConfig& cfg, PipelineState& state,
             const std::filesystem::path& out, std::ostream& log) {
    MboConfig mc;
    mc.fidelity_strength = cfg.get_double("mbo.c1", mc.fidelity_strength);
    mc.dt = cfg.get_double("mbo.dt", mc.dt);
    mc.inner_steps = cfg.get_int("mbo.inner_steps", mc.inner_steps);
    mc.max_outer_iters = cfg.get_int("mbo.max_iters", mc.max_outer_iters);
    mc.eigenpairs = cfg.get_int("mbo.eigenpairs", mc.eigenpairs);
    mc.metric = parse_metric(cfg.get_or("mbo.metric", "cos"));
    mc.sigma = cfg.get_double("mbo.sigma", mc.sigma);
    mc.init_quantile = cfg.get_double("mbo.quantile", mc.init_quantile);
    const int landmarks = cfg.get_int("mbo.nystrom", 300);
    mc.eigs.use_nystrom = landmarks > 0;
    mc.eigs.landmarks = landmarks;
    mc.eigs.seed = cfg.seed();

    ScoreVideo video;
    const std::string input = cfg.get_or("mbo.input", "scores");
    if (input == "scores") {
        video = need_scores(state, cfg);
    } else if (input == "falsecolor") {
        if (!state.falsecolor) {
            throw DomainError("mbo.input = falsecolor needs the pca stage");
        }
        const FalseColorVideo& fc = *state.falsecolor;
        video.frames = fc.frames;
        video.height = fc.height;
        video.width = fc.width;
        video.channels = 3;
        video.data = fc.data;
    } else {
        throw DomainError("mbo.input must be scores or falsecolor");
    }
    if (cfg.has("mbo.frames")) {
        const auto [begin, end] = parse_range(cfg.get("mbo.frames"));
        if (begin != 0) {
            throw DomainError("mbo.frames must start at 0 (uses frame pairs)");
        }
        if (end < video.frames) {
            ScoreVideo cut;
            cut.frames = end;
            cut.height = video.height;
            cut.width = video.width;
            cut.channels = video.channels;
            cut.data.assign(video.data.begin(),
                            video.data.begin() +
                                static_cast<std::size_t>(end) * video.height *
                                    video.width * video.channels);
            video = std::move(cut);
        }
    }

    const std::vector<PhaseField> fields = segment_video(video, mc);
    std::string trace = "frame,plume_pixels\n";
    char buf[96];
    for (std::size_t t = 0; t < fields.size(); ++t) {
        std::vector<std::uint8_t> mask(fields[t].u.size());
        std::size_t count = 0;
        for (std::size_t i = 0; i < mask.size(); ++i) {
            mask[i] = fields[t].u[i] > 0.0 ? 1 : 0;
            count += mask[i];
        }
        emit_mask(mask, fields[t].height, fields[t].width,
                  out / format_indexed_path("mbo_%04d.pgm", static_cast<int>(t)));
        std::snprintf(buf, sizeof buf, "%zu,%zu\n", t, count);
        trace += buf;
    }
    write_text_file(out / "mbo_summary.csv", trace);
    log << "mbo: segmented " << fields.size() << " frames\n";
}

}  // namespace

int run_pipeline(const PipelineConfig& config, std::ostream& log) {
    std::vector<StageTiming> timings;
    const std::filesystem::path out = config.out_dir();
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) {
        log << "pipeline: cannot create output directory " << out << "\n";
        return 1;
    }

    PipelineState state;
    state.release_frame = -1;

    for (const std::string& stage : config.stages()) {
        const auto start = std::chrono::steady_clock::now();
        try {
            if (stage == "synth") {
                run_synth(config, state, out);
            } else if (stage == "convert") {
                run_convert(config, state, out, log);
            } else if (stage == "pca") {
                run_pca(config, state, out);
            } else if (stage == "midway") {
                run_midway(config, state, out);
            } else if (stage == "amsd") {
                run_amsd(config, state, out, log);
            } else if (stage == "kmeans") {
                run_kmeans(config, state, out);
            } else if (stage == "spectral") {
                run_spectral(config, state, out);
            } else if (stage == "mbo") {
                run_mbo(config, state, out, log);
            }
        } catch (const std::exception& e) {
            log << "pipeline: stage " << stage << " failed: " << e.what() << "\n";
            write_text_file(out / "timings.csv", report_timings(timings));
            return 1;
        }
        const auto end = std::chrono::steady_clock::now();
        const double secs =
            std::chrono::duration<double>(end - start).count();
        timings.push_back({stage, secs});
        log << "stage " << stage << " done in " << secs << " s\n";
    }

    write_text_file(out / "timings.csv", report_timings(timings));
    return 0;
}

}  // namespace plumeseg
