#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace bluefeed {

/// Seeded random source used by every sampling routine.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The continuous distributions below are implemented here rather
/// than through <random> distributions, whose algorithms are left to the
/// standard library vendor, so streams are reproducible across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1), 53 random bits.
    double uniform01();

    /// Uniform on (0, 1), never returns an endpoint.
    double uniform_open01();

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller; consumes exactly two uniforms per call.
    double standard_normal();

    double normal(double mean, double stddev) { return mean + stddev * standard_normal(); }

    /// Rayleigh magnitude with scale sigma: E[x^2] = 2 sigma^2.
    double rayleigh(double sigma);

    /// Uniform integer on [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

/// Splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed of an independent substream.
///
/// The master seed and each tag are folded in order:
///   s = mix64(master); for tag t: s = mix64(s ^ (t + 0x9e3779b97f4a7c15)).
/// Distinct tag paths give statistically independent mt19937_64 streams.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags);

// Stream tags. Fixed values; changing them changes every recorded experiment.
namespace stream {
inline constexpr std::uint64_t network = 1;
inline constexpr std::uint64_t geometry = 2;
inline constexpr std::uint64_t training = 3;
inline constexpr std::uint64_t evaluation = 4;
inline constexpr std::uint64_t codebook_init = 5;
inline constexpr std::uint64_t trial_geometry = 6;
inline constexpr std::uint64_t measurement = 7;
}  // namespace stream

}  // namespace bluefeed
