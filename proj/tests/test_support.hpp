// Shared test oracles. Everything here is coded independently of the
// library paths it checks (different algorithms or direct brute force).
#ifndef PLUMESEG_TEST_SUPPORT_HPP
#define PLUMESEG_TEST_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "plumeseg/rng.hpp"

namespace testsup {

// ---- filesystem ---------------------------------------------------------

inline std::filesystem::path temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("plumeseg_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

// ---- independent Netpbm decoder ------------------------------------------

struct PnmImage {
    int width = 0, height = 0, channels = 0;
    std::vector<std::uint8_t> bytes;
};

inline PnmImage decode_pnm(const std::string& blob) {
    PnmImage img;
    if (blob.size() < 2 || blob[0] != 'P') throw std::runtime_error("bad pnm");
    if (blob[1] == '5') {
        img.channels = 1;
    } else if (blob[1] == '6') {
        img.channels = 3;
    } else {
        throw std::runtime_error("bad pnm type");
    }
    std::size_t pos = 2;
    auto next_int = [&]() {
        while (pos < blob.size() &&
               (std::isspace(static_cast<unsigned char>(blob[pos])) ||
                blob[pos] == '#')) {
            if (blob[pos] == '#') {
                while (pos < blob.size() && blob[pos] != '\n') ++pos;
            } else {
                ++pos;
            }
        }
        int v = 0;
        bool any = false;
        while (pos < blob.size() &&
               std::isdigit(static_cast<unsigned char>(blob[pos]))) {
            v = v * 10 + (blob[pos++] - '0');
            any = true;
        }
        if (!any) throw std::runtime_error("pnm: missing int");
        return v;
    };
    img.width = next_int();
    img.height = next_int();
    const int maxval = next_int();
    if (maxval != 255) throw std::runtime_error("pnm: maxval");
    ++pos;  // single whitespace
    const std::size_t n =
        static_cast<std::size_t>(img.width) * img.height * img.channels;
    if (blob.size() - pos != n) throw std::runtime_error("pnm: payload size");
    img.bytes.assign(blob.begin() + pos, blob.end());
    return img;
}

// ---- brute-force windowed median -----------------------------------------

inline std::vector<double> median_oracle(const std::vector<double>& img,
                                         int height, int width, int radius) {
    std::vector<double> out(img.size());
    for (int h = 0; h < height; ++h) {
        for (int w = 0; w < width; ++w) {
            std::vector<double> vals;
            for (int dh = -radius; dh <= radius; ++dh) {
                for (int dw = -radius; dw <= radius; ++dw) {
                    int hh = std::min(std::max(h + dh, 0), height - 1);
                    int ww = std::min(std::max(w + dw, 0), width - 1);
                    vals.push_back(img[static_cast<std::size_t>(hh) * width + ww]);
                }
            }
            std::sort(vals.begin(), vals.end());
            out[static_cast<std::size_t>(h) * width + w] =
                vals[(vals.size() - 1) / 2];
        }
    }
    return out;
}

// ---- labels --------------------------------------------------------------

// best agreement fraction over all label permutations (k <= 8)
inline double permutation_agreement(const std::vector<int>& a,
                                    const std::vector<int>& b, int k) {
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    double best = 0.0;
    do {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (perm[a[i]] == b[i]) ++hits;
        }
        best = std::max(best, static_cast<double>(hits) / a.size());
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// ---- ROC AUC (Mann-Whitney with midranks) ---------------------------------

inline double roc_auc(const std::vector<double>& scores,
                      const std::vector<std::uint8_t>& positive) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return scores[x] < scores[y];
    });
    std::vector<double> rank(scores.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]])
            ++j;
        const double mid = 0.5 * (i + j) + 1.0;  // 1-based midrank
        for (std::size_t r = i; r <= j; ++r) rank[order[r]] = mid;
        i = j + 1;
    }
    double pos_ranks = 0.0;
    std::size_t n_pos = 0, n_neg = 0;
    for (std::size_t p = 0; p < scores.size(); ++p) {
        if (positive[p]) {
            pos_ranks += rank[p];
            ++n_pos;
        } else {
            ++n_neg;
        }
    }
    if (n_pos == 0 || n_neg == 0) throw std::runtime_error("auc: one class empty");
    return (pos_ranks - 0.5 * n_pos * (n_pos + 1)) /
           (static_cast<double>(n_pos) * n_neg);
}

// ---- Kolmogorov-Smirnov between two samples -------------------------------

inline double ks_distance(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) {
            ++i;
        } else {
            ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                                 static_cast<double>(j) / b.size()));
    }
    return d;
}

// ---- high-precision Planck evaluation -------------------------------------

inline double planck_oracle(double wavenumber, double temperature) {
    const long double h = 6.62607015e-34L;
    const long double c = 299792458.0L;
    const long double k = 1.380649e-23L;
    const long double nu = wavenumber, t = temperature;
    const long double x = h * c * nu / (k * t);
    return static_cast<double>(2.0L * h * c * c * nu * nu * nu /
                               (std::exp(x) - 1.0L));
}

// ---- deterministic data generators ----------------------------------------

inline std::vector<double> uniform_vector(std::size_t n, std::uint64_t seed,
                                          double lo = 0.0, double hi = 1.0) {
    plumeseg::SplitMix64 rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = lo + (hi - lo) * rng.next_u01();
    return v;
}

inline std::vector<double> gaussian_vector(std::size_t n, std::uint64_t seed) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = plumeseg::gaussian_at(seed, i);
    return v;
}

// ---- roots of a cubic characteristic polynomial ---------------------------

// eigenvalues of a symmetric 3x3 via the trigonometric closed form
inline std::vector<double> symmetric3_eigenvalues(const double m[3][3]) {
    const double p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    const double q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    const double p2 = (m[0][0] - q) * (m[0][0] - q) +
                      (m[1][1] - q) * (m[1][1] - q) +
                      (m[2][2] - q) * (m[2][2] - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    if (p < 1e-300) return {q, q, q};
    double b[3][3];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            b[i][j] = (m[i][j] - (i == j ? q : 0.0)) / p;
        }
    }
    const double detb =
        b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
        b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
        b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    double r = detb / 2.0;
    r = std::min(1.0, std::max(-1.0, r));
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    const double e2 = 3.0 * q - e1 - e3;
    std::vector<double> out = {e1, e2, e3};
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace testsup

#endif
