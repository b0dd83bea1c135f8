#include "plumeseg/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plumeseg/errors.hpp"

namespace plumeseg {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t SplitMix64::next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t SplitMix64::next_below(std::uint64_t bound) {
    // Rejection below the largest multiple of bound; unbiased.
    const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
    std::uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return x % bound;
}

double SplitMix64::next_u01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double gaussian_at(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t key = mix64(seed);
    const std::uint64_t a = mix64(key ^ (2 * counter));
    const std::uint64_t b = mix64(key ^ (2 * counter + 1));
    // Box-Muller; u1 in (0,1] keeps the log finite.
    const double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<int> sample_without_replacement(int n, int k, std::uint64_t seed) {
    if (k < 0 || k > n) {
        throw DomainError("cannot sample " + std::to_string(k) + " of " +
                          std::to_string(n) + " indices without replacement");
    }
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    SplitMix64 rng(seed);
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(rng.next_below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace plumeseg
