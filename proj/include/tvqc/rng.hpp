#pragma once

#include <array>
#include <cstdint>

namespace tvqc {

/// SplitMix64 finalizer. Used to derive stream states and cell seeds.
std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic 64-bit mix of a list of words (order sensitive).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

/// Reproducible random stream.
///
/// The generator is xoshiro256** (Blackman & Vigna) whose 256-bit state is
/// filled by SplitMix64 seeded with a mix of (seed, stream_id). Every
/// distribution below is implemented here rather than taken from <random>,
/// so a given (seed, stream_id) yields the same sequence on every platform.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal via the Marsaglia polar method.
    double normal();
    /// Binomial(trials, p) by summing Bernoulli trials; exact, O(trials).
    std::uint64_t binomial(std::uint64_t trials, double p);
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::array<std::uint64_t, 4> s_{};
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

} // namespace tvqc
