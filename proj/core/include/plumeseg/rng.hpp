#ifndef PLUMESEG_RNG_HPP
#define PLUMESEG_RNG_HPP

#include <cstdint>
#include <vector>

namespace plumeseg {

/// splitmix64 finalizer; full-avalanche 64-bit mixing.
std::uint64_t mix64(std::uint64_t x);

/// Sequential deterministic stream, identical on every platform.
/// (std:: distributions are implementation-defined, so they are avoided
/// everywhere reproducibility is part of the contract.)
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    /// Uniform in [0, bound) by rejection; bound > 0.
    std::uint64_t next_below(std::uint64_t bound);
    /// Uniform double in [0, 1).
    double next_u01();

private:
    std::uint64_t state_;
};

/// Counter-based Gaussian stream: the sample for a given (seed, counter)
/// pair is a pure function of its arguments, so parallel or reordered
/// evaluation cannot change results.
double gaussian_at(std::uint64_t seed, std::uint64_t counter);

/// k distinct indices drawn uniformly from [0, n), returned ascending.
std::vector<int> sample_without_replacement(int n, int k, std::uint64_t seed);

}  // namespace plumeseg

#endif
