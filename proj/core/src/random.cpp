#include "otfsop/random.hpp"

#include <cmath>
#include <stdexcept>

namespace otfsop {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& ctr,
                         const std::array<std::uint32_t, 2>& key) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t derive_key(std::uint64_t master_seed, std::uint64_t tag) {
    return splitmix64(master_seed ^ splitmix64(tag));
}

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        philox_round(ctr, key);
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

RandomStream::RandomStream(std::uint64_t key, std::uint64_t stream)
    : ctr_{0u, 0u, static_cast<std::uint32_t>(stream),
           static_cast<std::uint32_t>(stream >> 32)},
      key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
      buf_{},
      pos_(4),
      cached_normal_(0.0),
      has_cached_normal_(false) {}

void RandomStream::refill() {
    buf_ = philox4x32(ctr_, key_);
    // 64-bit block counter in words 0..1; words 2..3 hold the stream id.
    if (++ctr_[0] == 0u) ++ctr_[1];
    pos_ = 0;
}

std::uint32_t RandomStream::next_u32() {
    if (pos_ >= 4) refill();
    return buf_[pos_++];
}

std::uint64_t RandomStream::next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
}

double RandomStream::uniform01() {
    // (v + 0.5) / 2^53 with v in [0, 2^53) never returns 0 or 1.
    const std::uint64_t v = next_u64() >> 11;
    return (static_cast<double>(v) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = kTwoPi * u2;
    cached_normal_ = r * std::sin(a);
    has_cached_normal_ = true;
    return r * std::cos(a);
}

std::complex<double> RandomStream::circular_normal(double power) {
    if (!(power >= 0.0)) throw std::domain_error("circular_normal: power must be >= 0");
    const double s = std::sqrt(power / 2.0);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
}

double RandomStream::exponential(double mean) {
    if (!(mean >= 0.0)) throw std::domain_error("exponential: mean must be >= 0");
    return -mean * std::log(uniform01());
}

double RandomStream::gamma(double shape, double scale) {
    if (!(shape > 0.0)) throw std::domain_error("gamma: shape must be > 0");
    if (!(scale >= 0.0)) throw std::domain_error("gamma: scale must be >= 0");
    if (scale == 0.0) return 0.0;
    if (shape == 1.0) return exponential(scale);
    if (shape < 1.0) {
        const double u = uniform01();
        return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

}  // namespace otfsop
