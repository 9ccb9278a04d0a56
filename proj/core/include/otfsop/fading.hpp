#pragma once

// Fading laws for the two hops: shadowed-Rician (LEO -> HAPS, with MRT over K
// i.i.d. antennas) and Nakagami-m (HAPS -> BS). Provides pdfs, closed-form
// inverse moments of the MRT power sum, the inverse-gamma mapping for the
// second hop, and samplers driven by caller-provided random substreams.

#include <complex>
#include <span>
#include <vector>

#include "otfsop/errors.hpp"
#include "otfsop/random.hpp"

namespace otfsop::fading {

// Shadowed-Rician parameters: integer fading severity m, scatter half-power
// b0 (2*b0 is the average scattered power), average LOS power omega.
struct SRParams {
    int m = 1;
    double b0 = 0.0;
    double omega = 0.0;

    void validate() const;  // m >= 1, b0 > 0, omega >= 0
    friend bool operator==(const SRParams&, const SRParams&) = default;
};

// Coefficients of the SR instantaneous-power pdf
//   f(x) = alpha * exp(-beta * x) * 1F1(m; 1; c * x),   x >= 0.
struct SRCoeffs {
    double alpha = 0.0;
    double beta = 0.0;
    double c = 0.0;

    // Exponential decay rate of the expanded pdf; beta > c always holds.
    double rate() const { return beta - c; }
};

struct NakagamiParams {
    double m = 1.0;      // shape, >= 0.5
    double omega = 1.0;  // mean power

    void validate() const;
    friend bool operator==(const NakagamiParams&, const NakagamiParams&) = default;
};

// Inverse-gamma (shape alpha_ig, scale beta_ig) law of 1/|D|^2 when
// |D|^2 ~ Gamma(shape m, mean omega).
struct IGParams {
    double alpha_ig = 0.0;
    double beta_ig = 0.0;

    bool has_mean() const { return alpha_ig > 1.0; }
    bool has_variance() const { return alpha_ig > 2.0; }
    double mean() const;      // beta_ig / (alpha_ig - 1); throws if undefined
    double variance() const;  // throws if undefined

    void validate() const;
};

SRCoeffs sr_coeffs(const SRParams& p);

// SR power pdf via the finite Pochhammer expansion
//   f(x) = sum_{k=0}^{m-1} xi(k) * alpha * x^k * exp(-(beta - c) x).
double sr_power_pdf(const SRParams& p, double x);

// Closed form for z = sum of K i.i.d. SR powers (the MRT combining
// statistic). The K-fold nested sum is enumerated once into coefficients of
// z^(K+s-1) exp(-(beta-c) z); pdf and inverse-moment evaluations are then
// cheap. Log-domain weights keep the enumeration stable.
class MrtPowerSum {
public:
    MrtPowerSum(const SRParams& p, int antennas);

    double pdf(double z) const;

    // E[z^-n], n >= 1; requires antennas > n (gamma pole otherwise).
    double inverse_moment(int n) const;

    // Analytic integral of the pdf; equals 1 up to roundoff.
    double total_mass() const;

    int antennas() const { return antennas_; }
    const SRCoeffs& coeffs() const { return coeffs_; }

private:
    SRCoeffs coeffs_;
    int antennas_ = 0;
    std::vector<double> coeff_;  // coeff_[s] multiplies z^(K+s-1) e^(-rate z)
};

double mrt_sum_pdf(const SRParams& p, int antennas, double z);

// Heterogeneous antennas are not supported by the closed form; parameters
// must be identical across the span.
double mrt_sum_pdf(std::span<const SRParams> per_antenna, double z);

double sr_inverse_moment(const SRParams& p, int antennas, int n);

IGParams ig_from_nakagami(const NakagamiParams& p);

// One SR channel gain h = A e^{j theta} + w: A is Nakagami(m, omega)
// distributed, theta uniform, w circular Gaussian with power 2*b0.
std::complex<double> sample_sr_gain(const SRParams& p, RandomStream& rng);

// One squared Nakagami gain |D|^2 ~ Gamma(shape m, mean omega).
double sample_nakagami_power(const NakagamiParams& p, RandomStream& rng);

}  // namespace otfsop::fading
