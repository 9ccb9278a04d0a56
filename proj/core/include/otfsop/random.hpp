#pragma once

// Counter-based random streams (Philox4x32-10).
//
// Every (key, stream) pair is an independent substream with a 2^64 block
// counter. Monte Carlo trials map one-to-one onto streams, so the sample a
// trial produces depends only on (key, trial index), never on how trials are
// scheduled across workers. Distinct operations derive distinct keys from the
// master seed via derive_key().

#include <array>
#include <complex>
#include <cstdint>

namespace otfsop {

// splitmix64 finalizer, used to decorrelate trivially related seeds/tags.
std::uint64_t splitmix64(std::uint64_t x);

// Key for an operation-scoped stream family.
std::uint64_t derive_key(std::uint64_t master_seed, std::uint64_t tag);

// One 128-bit block of the Philox4x32-10 keyed permutation.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

class RandomStream {
public:
    RandomStream(std::uint64_t key, std::uint64_t stream);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    // Uniform on the open interval (0, 1); 53-bit resolution.
    double uniform01();

    // Standard normal via Box-Muller (second deviate cached).
    double normal();

    // Circularly symmetric complex normal with E|w|^2 = power.
    std::complex<double> circular_normal(double power);

    double exponential(double mean);

    // Gamma(shape, scale), shape > 0; Marsaglia-Tsang with the shape < 1 boost.
    double gamma(double shape, double scale);

private:
    void refill();

    std::array<std::uint32_t, 4> ctr_;
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> buf_;
    int pos_;
    double cached_normal_;
    bool has_cached_normal_;
};

}  // namespace otfsop
