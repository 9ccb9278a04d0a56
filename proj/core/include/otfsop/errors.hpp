#pragma once

#include <stdexcept>
#include <string>

namespace otfsop {

// Requested statistic does not exist for the given parameters (gamma-function
// pole in a closed-form moment, or an approximation whose variance is
// undefined).
class DivergentMomentError : public std::domain_error {
public:
    explicit DivergentMomentError(const std::string& what)
        : std::domain_error(what) {}
};

// A frequency bin of the channel is (numerically) zero; ZF equalization and
// the noise-enhancement statistics are undefined there.
class SingularChannelError : public std::runtime_error {
public:
    SingularChannelError(int doppler_bin, int delay_bin, const std::string& what)
        : std::runtime_error(what), doppler_bin_(doppler_bin), delay_bin_(delay_bin) {}

    int doppler_bin() const noexcept { return doppler_bin_; }
    int delay_bin() const noexcept { return delay_bin_; }

private:
    int doppler_bin_;
    int delay_bin_;
};

// Parameter combination outside the supported model (e.g. per-antenna fading
// parameters that differ, where the closed form assumes i.i.d. antennas).
class UnsupportedConfigError : public std::invalid_argument {
public:
    explicit UnsupportedConfigError(const std::string& what)
        : std::invalid_argument(what) {}
};

}  // namespace otfsop
