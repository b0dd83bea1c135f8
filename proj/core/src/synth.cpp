#include "plumeseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "plumeseg/errors.hpp"
#include "plumeseg/radiometry.hpp"
#include "plumeseg/rng.hpp"

namespace plumeseg {

std::vector<double> flat_spectrum(int bands, double value) {
    return std::vector<double>(bands, value);
}

std::vector<double> ramp_spectrum(int bands, double first, double last) {
    std::vector<double> s(bands);
    for (int b = 0; b < bands; ++b) {
        const double f = (bands > 1) ? static_cast<double>(b) / (bands - 1) : 0.0;
        s[b] = first + (last - first) * f;
    }
    return s;
}

std::vector<double> notch_spectrum(int bands, double base, double depth,
                                   double center, double width) {
    std::vector<double> s(bands);
    for (int b = 0; b < bands; ++b) {
        const double f = (bands > 1) ? static_cast<double>(b) / (bands - 1) : 0.0;
        const double z = (f - center) / width;
        s[b] = base - depth * std::exp(-z * z);
    }
    return s;
}

std::vector<std::array<double, 2>> rect_polygon(double x0, double y0, double x1,
                                                double y1) {
    return {{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

namespace {

bool point_in_polygon(double x, double y,
                      const std::vector<std::array<double, 2>>& poly) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const double xi = poly[i][0], yi = poly[i][1];
        const double xj = poly[j][0], yj = poly[j][1];
        if (((yi > y) != (yj > y)) &&
            (x < (xj - xi) * (y - yi) / (yj - yi) + xi)) {
            inside = !inside;
        }
    }
    return inside;
}

void check_spectrum(const std::vector<double>& s, int bands, const char* what) {
    if (s.size() != static_cast<std::size_t>(bands)) {
        throw DomainError(std::string(what) + " spectrum has " +
                          std::to_string(s.size()) + " bands, expected " +
                          std::to_string(bands));
    }
    for (double v : s) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw DomainError(std::string(what) +
                              " spectrum value outside [0,1]: " + std::to_string(v));
        }
    }
}

// region index per pixel; throws unless regions partition the frame
std::vector<int> region_map(const SceneSpec& spec) {
    std::vector<int> map(static_cast<std::size_t>(spec.height) * spec.width, -1);
    for (int h = 0; h < spec.height; ++h) {
        for (int w = 0; w < spec.width; ++w) {
            const double x = w + 0.5, y = h + 0.5;
            int hit = -1;
            for (std::size_t r = 0; r < spec.regions.size(); ++r) {
                if (point_in_polygon(x, y, spec.regions[r].polygon)) {
                    if (hit >= 0) {
                        throw DomainError("regions overlap at pixel (" +
                                          std::to_string(h) + "," +
                                          std::to_string(w) + ")");
                    }
                    hit = static_cast<int>(r);
                }
            }
            if (hit < 0) {
                throw DomainError("no region covers pixel (" + std::to_string(h) +
                                  "," + std::to_string(w) + ")");
            }
            map[static_cast<std::size_t>(h) * spec.width + w] = hit;
        }
    }
    return map;
}

}  // namespace

void SceneSpec::validate() const {
    if (frames <= 0 || height <= 0 || width <= 0 || bands <= 0) {
        throw DomainError("scene has degenerate dimensions");
    }
    if (!(wavelength_step_nm > 0.0) || !(wavelength_start_nm > 0.0)) {
        throw DomainError("wavelength grid must be positive and ascending");
    }
    if (regions.empty()) {
        throw DomainError("scene needs at least one region");
    }
    for (std::size_t r = 0; r < regions.size(); ++r) {
        if (regions[r].polygon.size() < 3) {
            throw DomainError("region " + std::to_string(r) +
                              " polygon needs at least 3 vertices");
        }
        if (!(regions[r].temperature_k > 0.0)) {
            throw DomainError("region " + std::to_string(r) +
                              " temperature must be positive");
        }
        check_spectrum(regions[r].emissivity, bands,
                       ("region " + std::to_string(r)).c_str());
    }
    if (plume.enabled) {
        if (plume.release_frame < 0 || plume.release_frame >= frames) {
            throw DomainError("plume release frame outside [0, frames)");
        }
        if (!(plume.amplitude >= 0.0) || !(plume.sigma0 > 0.0) ||
            !(plume.sigma_growth >= 0.0)) {
            throw DomainError("plume shape parameters must be non-negative");
        }
        check_spectrum(plume.emissivity, bands, "plume");
    }
    if (!(noise_std >= 0.0)) {
        throw DomainError("noise std must be non-negative");
    }
    if (!(truth_cutoff > 0.0)) {
        throw DomainError("truth cutoff must be positive");
    }
    region_map(*this);  // verifies the partition
}

std::size_t GroundTruth::frame_plume_pixels(int t) const {
    const auto m = frame_mask(t);
    std::size_t c = 0;
    for (auto v : m) c += (v != 0) ? 1 : 0;
    return c;
}

SynthResult generate(const SceneSpec& spec) {
    spec.validate();
    const std::vector<int> rmap = region_map(spec);

    SynthResult out;
    HyperCube& cube = out.cube;
    cube.frames = spec.frames;
    cube.height = spec.height;
    cube.width = spec.width;
    cube.bands = spec.bands;
    cube.kind = CubeKind::Radiance;
    cube.wavelengths_nm.resize(spec.bands);
    for (int b = 0; b < spec.bands; ++b) {
        cube.wavelengths_nm[b] =
            spec.wavelength_start_nm + spec.wavelength_step_nm * b;
    }
    cube.data.resize(cube.sample_count());

    GroundTruth& truth = out.truth;
    truth.frames = spec.frames;
    truth.height = spec.height;
    truth.width = spec.width;
    truth.release_frame = spec.plume.release_frame;
    truth.cutoff = spec.truth_cutoff;
    truth.masks.assign(
        static_cast<std::size_t>(spec.frames) * spec.height * spec.width, 0);
    truth.target_signature = spec.plume.enabled
                                 ? spec.plume.emissivity
                                 : std::vector<double>(spec.bands, 0.0);

    // per-region blackbody excitance per band
    std::vector<std::vector<double>> region_excitance(spec.regions.size());
    for (std::size_t r = 0; r < spec.regions.size(); ++r) {
        region_excitance[r].resize(spec.bands);
        for (int b = 0; b < spec.bands; ++b) {
            region_excitance[r][b] =
                planck_excitance(wavenumber_from_nm(cube.wavelengths_nm[b]),
                                 spec.regions[r].temperature_k);
        }
    }

    for (int t = 0; t < spec.frames; ++t) {
        const int dt = t - spec.plume.release_frame;
        const bool active = spec.plume.enabled && dt >= 0;
        const double sigma =
            active ? spec.plume.sigma0 + spec.plume.sigma_growth * dt : 0.0;
        const double amp =
            active ? spec.plume.amplitude * std::exp(-spec.plume.decay_rate * dt)
                   : 0.0;
        const double cx = spec.plume.center_x + spec.plume.velocity_x * dt;
        const double cy = spec.plume.center_y + spec.plume.velocity_y * dt;

        for (int h = 0; h < spec.height; ++h) {
            for (int w = 0; w < spec.width; ++w) {
                const std::size_t pix = static_cast<std::size_t>(h) * spec.width + w;
                const int reg = rmap[pix];
                const std::vector<double>& eps_bg = spec.regions[reg].emissivity;
                const std::vector<double>& exc = region_excitance[reg];

                double conc = 0.0;
                if (active) {
                    const double dx = (w + 0.5) - cx;
                    const double dy = (h + 0.5) - cy;
                    conc = amp * std::exp(-(dx * dx + dy * dy) /
                                          (2.0 * sigma * sigma));
                    conc = std::clamp(conc, 0.0, 1.0);
                }
                if (conc > spec.truth_cutoff) {
                    truth.masks[(static_cast<std::size_t>(t) * spec.height + h) *
                                    spec.width + w] = 1;
                }

                const std::size_t base =
                    cube.pixel_index(t, h, w) * static_cast<std::size_t>(spec.bands);
                for (int b = 0; b < spec.bands; ++b) {
                    const double eps =
                        (1.0 - conc) * eps_bg[b] +
                        conc * (spec.plume.enabled ? spec.plume.emissivity[b] : 0.0);
                    double v = eps * exc[b];
                    if (spec.noise_std > 0.0) {
                        v += spec.noise_std * gaussian_at(spec.seed, base + b);
                    }
                    cube.data[base + b] = v;
                }
            }
        }
    }
    return out;
}

SceneSpec default_scene() {
    SceneSpec s;
    s.frames = 40;
    s.height = 32;
    s.width = 64;
    s.bands = 32;
    s.seed = 1;
    s.noise_std = 2.5e-6;
    s.truth_cutoff = 0.1;

    RegionSpec sky;
    sky.polygon = rect_polygon(0, 0, 64, 10);
    sky.temperature_k = 260.0;
    sky.emissivity = ramp_spectrum(s.bands, 0.55, 0.65);
    RegionSpec mountains;
    mountains.polygon = rect_polygon(0, 10, 64, 20);
    mountains.temperature_k = 290.0;
    mountains.emissivity = ramp_spectrum(s.bands, 0.82, 0.74);
    RegionSpec desert;
    desert.polygon = rect_polygon(0, 20, 64, 32);
    desert.temperature_k = 300.0;
    desert.emissivity = ramp_spectrum(s.bands, 0.80, 0.888);
    s.regions = {sky, mountains, desert};

    s.plume.enabled = true;
    s.plume.release_frame = 8;
    s.plume.center_x = 24.0;
    s.plume.center_y = 24.0;
    s.plume.velocity_x = 0.3;
    s.plume.velocity_y = 0.0;
    s.plume.sigma0 = 4.2;
    s.plume.sigma_growth = 0.0;
    s.plume.decay_rate = 0.05;
    s.plume.amplitude = 1.0;
    s.plume.emissivity = notch_spectrum(s.bands, 0.85, 0.45, 0.45, 0.16);
    return s;
}

namespace {

std::vector<double> parse_spectrum(const std::string& text, int bands) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    auto num = [&](std::size_t i) { return std::stod(parts.at(i)); };
    if (parts[0] == "flat" && parts.size() == 2) {
        return flat_spectrum(bands, num(1));
    }
    if (parts[0] == "ramp" && parts.size() == 3) {
        return ramp_spectrum(bands, num(1), num(2));
    }
    if (parts[0] == "notch" && parts.size() == 5) {
        return notch_spectrum(bands, num(1), num(2), num(3), num(4));
    }
    if (parts[0] == "list" && parts.size() == 2) {
        std::vector<double> s;
        std::stringstream ss(parts[1]);
        std::string tok;
        while (std::getline(ss, tok, ',')) s.push_back(std::stod(tok));
        return s;
    }
    throw DomainError("unknown spectrum spec: " + text);
}

std::string spectrum_text(const std::vector<double>& s) {
    std::string out = "list:";
    char buf[64];
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", s[i]);
        if (i) out += ',';
        out += buf;
    }
    return out;
}

std::array<double, 2> parse_pair(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw DomainError("expected x,y pair, got: " + text);
    }
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

std::map<std::string, std::string> parse_kv(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
        };
        trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw DomainError("config line " + std::to_string(lineno) +
                              " is not key = value: " + line);
        }
        std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        trim(key);
        trim(value);
        if (kv.count(key)) {
            throw DomainError("duplicate config key: " + key);
        }
        kv[key] = value;
    }
    return kv;
}

}  // namespace

SceneSpec parse_scene_config(const std::string& text) {
    auto kv = parse_kv(text);
    auto take = [&](const std::string& key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) {
            throw DomainError("scene config missing key: " + key);
        }
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto take_or = [&](const std::string& key, const std::string& fallback) {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    SceneSpec s;
    s.frames = std::stoi(take("frames"));
    s.height = std::stoi(take("height"));
    s.width = std::stoi(take("width"));
    s.bands = std::stoi(take("bands"));
    s.wavelength_start_nm = std::stod(take_or("wavelength_start_nm", "7830"));
    s.wavelength_step_nm = std::stod(take_or("wavelength_step_nm", "30"));
    s.noise_std = std::stod(take_or("noise_std", "0"));
    s.truth_cutoff = std::stod(take_or("truth_cutoff", "0.1"));
    s.seed = std::stoull(take_or("seed", "0"));

    for (int r = 0;; ++r) {
        const std::string prefix = "region." + std::to_string(r) + ".";
        if (!kv.count(prefix + "polygon")) break;
        RegionSpec reg;
        std::stringstream ss(take(prefix + "polygon"));
        std::string tok;
        while (ss >> tok) reg.polygon.push_back(parse_pair(tok));
        reg.temperature_k = std::stod(take(prefix + "temperature_k"));
        reg.emissivity = parse_spectrum(take(prefix + "emissivity"), s.bands);
        s.regions.push_back(std::move(reg));
    }

    s.plume.enabled = take_or("plume.enabled", "true") == "true";
    if (s.plume.enabled) {
        s.plume.release_frame = std::stoi(take("plume.release_frame"));
        const auto c = parse_pair(take("plume.center"));
        s.plume.center_x = c[0];
        s.plume.center_y = c[1];
        const auto v = parse_pair(take_or("plume.velocity", "0,0"));
        s.plume.velocity_x = v[0];
        s.plume.velocity_y = v[1];
        s.plume.sigma0 = std::stod(take("plume.sigma0"));
        s.plume.sigma_growth = std::stod(take_or("plume.sigma_growth", "0"));
        s.plume.decay_rate = std::stod(take_or("plume.decay_rate", "0"));
        s.plume.amplitude = std::stod(take_or("plume.amplitude", "1"));
        s.plume.emissivity = parse_spectrum(take("plume.emissivity"), s.bands);
    }

    if (!kv.empty()) {
        throw DomainError("unknown scene config key: " + kv.begin()->first);
    }
    s.validate();
    return s;
}

std::string scene_config_text(const SceneSpec& spec) {
    std::ostringstream out;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "frames = " << spec.frames << "\n";
    out << "height = " << spec.height << "\n";
    out << "width = " << spec.width << "\n";
    out << "bands = " << spec.bands << "\n";
    out << "wavelength_start_nm = " << num(spec.wavelength_start_nm) << "\n";
    out << "wavelength_step_nm = " << num(spec.wavelength_step_nm) << "\n";
    out << "noise_std = " << num(spec.noise_std) << "\n";
    out << "truth_cutoff = " << num(spec.truth_cutoff) << "\n";
    out << "seed = " << spec.seed << "\n";
    for (std::size_t r = 0; r < spec.regions.size(); ++r) {
        const std::string prefix = "region." + std::to_string(r) + ".";
        out << prefix << "polygon =";
        for (const auto& p : spec.regions[r].polygon) {
            out << " " << num(p[0]) << "," << num(p[1]);
        }
        out << "\n";
        out << prefix << "temperature_k = " << num(spec.regions[r].temperature_k)
            << "\n";
        out << prefix << "emissivity = " << spectrum_text(spec.regions[r].emissivity)
            << "\n";
    }
    out << "plume.enabled = " << (spec.plume.enabled ? "true" : "false") << "\n";
    if (spec.plume.enabled) {
        out << "plume.release_frame = " << spec.plume.release_frame << "\n";
        out << "plume.center = " << num(spec.plume.center_x) << ","
            << num(spec.plume.center_y) << "\n";
        out << "plume.velocity = " << num(spec.plume.velocity_x) << ","
            << num(spec.plume.velocity_y) << "\n";
        out << "plume.sigma0 = " << num(spec.plume.sigma0) << "\n";
        out << "plume.sigma_growth = " << num(spec.plume.sigma_growth) << "\n";
        out << "plume.decay_rate = " << num(spec.plume.decay_rate) << "\n";
        out << "plume.amplitude = " << num(spec.plume.amplitude) << "\n";
        out << "plume.emissivity = " << spectrum_text(spec.plume.emissivity) << "\n";
    }
    return out.str();
}

}  // namespace plumeseg
