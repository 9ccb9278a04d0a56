#include "otfsop/fading.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "otfsop/special.hpp"

namespace otfsop::fading {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// xi(k) = (-1)^k (1-m)_k c^k / (k!)^2 for k = 0 .. m-1. All values are
// nonnegative: the alternating sign cancels the sign of the Pochhammer factor.
std::vector<double> xi_coefficients(int m, double c) {
    std::vector<double> xi(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        const double kfact = std::tgamma(static_cast<double>(k) + 1.0);
        xi[static_cast<std::size_t>(k)] =
            sign * special::pochhammer(1.0 - m, k) * std::pow(c, k) / (kfact * kfact);
    }
    return xi;
}

}  // namespace

void SRParams::validate() const {
    if (m < 1) throw std::domain_error("SRParams: m must be an integer >= 1");
    if (!(b0 > 0.0)) throw std::domain_error("SRParams: b0 must be > 0");
    if (!(omega >= 0.0)) throw std::domain_error("SRParams: omega must be >= 0");
}

void NakagamiParams::validate() const {
    if (!(m >= 0.5)) throw std::domain_error("NakagamiParams: m must be >= 0.5");
    if (!(omega > 0.0)) throw std::domain_error("NakagamiParams: omega must be > 0");
}

void IGParams::validate() const {
    if (!(alpha_ig > 0.0)) throw std::domain_error("IGParams: alpha_ig must be > 0");
    if (!(beta_ig > 0.0)) throw std::domain_error("IGParams: beta_ig must be > 0");
}

double IGParams::mean() const {
    if (!has_mean()) {
        throw DivergentMomentError(
            "inverse-gamma mean undefined: requires alpha_ig > 1 (got alpha_ig = " +
            std::to_string(alpha_ig) + ")");
    }
    return beta_ig / (alpha_ig - 1.0);
}

double IGParams::variance() const {
    if (!has_variance()) {
        throw DivergentMomentError(
            "inverse-gamma variance undefined: requires alpha_ig > 2 (got alpha_ig = " +
            std::to_string(alpha_ig) + ")");
    }
    const double am1 = alpha_ig - 1.0;
    return beta_ig * beta_ig / (am1 * am1 * (alpha_ig - 2.0));
}

SRCoeffs sr_coeffs(const SRParams& p) {
    p.validate();
    const double two_b0 = 2.0 * p.b0;
    const double denom = two_b0 * p.m + p.omega;
    SRCoeffs co;
    co.alpha = std::pow(two_b0 * p.m / denom, p.m) / two_b0;
    co.beta = 1.0 / two_b0;
    co.c = p.omega / (two_b0 * denom);
    return co;
}

double sr_power_pdf(const SRParams& p, double x) {
    if (!(x >= 0.0)) throw std::domain_error("sr_power_pdf: x must be >= 0");
    const SRCoeffs co = sr_coeffs(p);
    const std::vector<double> xi = xi_coefficients(p.m, co.c);
    double poly = 0.0;
    double xk = 1.0;
    for (int k = 0; k < p.m; ++k) {
        poly += xi[static_cast<std::size_t>(k)] * xk;
        xk *= x;
    }
    return co.alpha * poly * std::exp(-co.rate() * x);
}

MrtPowerSum::MrtPowerSum(const SRParams& p, int antennas)
    : coeffs_(sr_coeffs(p)), antennas_(antennas) {
    if (antennas < 1) throw std::domain_error("MrtPowerSum: antennas must be >= 1");
    const int m = p.m;
    if (std::pow(static_cast<double>(m), antennas) > 6.7e7) {
        throw UnsupportedConfigError(
            "MrtPowerSum: m^K term count too large to enumerate (m = " +
            std::to_string(m) + ", K = " + std::to_string(antennas) + ")");
    }

    const std::vector<double> xi = xi_coefficients(m, coeffs_.c);
    std::vector<double> log_xi(xi.size());
    for (std::size_t k = 0; k < xi.size(); ++k) {
        log_xi[k] = xi[k] > 0.0 ? std::log(xi[k]) : 0.0;  // zero xi terms are skipped
    }

    // lgamma of small integers, indexed by value.
    const int max_int = antennas * (m - 1) + antennas + 2;
    std::vector<double> lg(static_cast<std::size_t>(max_int) + 1, 0.0);
    for (int i = 1; i <= max_int; ++i) lg[static_cast<std::size_t>(i)] = std::lgamma(static_cast<double>(i));
    const auto log_beta_int = [&lg](int a, int b) {
        return lg[static_cast<std::size_t>(a)] + lg[static_cast<std::size_t>(b)] -
               lg[static_cast<std::size_t>(a + b)];
    };

    coeff_.assign(static_cast<std::size_t>(antennas * (m - 1)) + 1, 0.0);
    const double log_alpha_k = antennas * std::log(coeffs_.alpha);

    // Depth-first enumeration of (k_1, ..., k_K); carries the partial sum s
    // and the log-weight log(prod xi(k_i)) + log(prod B(...)).
    struct Frame {
        int depth;
        int sum;
        double logw;
    };
    std::vector<Frame> stack;
    stack.reserve(64);
    for (int k1 = 0; k1 < m; ++k1) {
        if (xi[static_cast<std::size_t>(k1)] == 0.0) continue;
        stack.push_back({1, k1, log_xi[static_cast<std::size_t>(k1)]});
    }
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        if (f.depth == antennas) {
            coeff_[static_cast<std::size_t>(f.sum)] += std::exp(log_alpha_k + f.logw);
            continue;
        }
        for (int k = 0; k < m; ++k) {
            if (xi[static_cast<std::size_t>(k)] == 0.0) continue;
            const double lb = log_beta_int(f.sum + f.depth, k + 1);
            stack.push_back({f.depth + 1, f.sum + k,
                             f.logw + log_xi[static_cast<std::size_t>(k)] + lb});
        }
    }
}

double MrtPowerSum::pdf(double z) const {
    if (!(z >= 0.0)) throw std::domain_error("MrtPowerSum::pdf: z must be >= 0");
    double poly = 0.0;
    for (std::size_t s = coeff_.size(); s-- > 0;) {
        poly = poly * z + coeff_[s];
    }
    return poly * std::pow(z, antennas_ - 1) * std::exp(-coeffs_.rate() * z);
}

double MrtPowerSum::inverse_moment(int n) const {
    if (n < 1) throw std::domain_error("MrtPowerSum::inverse_moment: n must be >= 1");
    if (antennas_ <= n) {
        throw DivergentMomentError(
            "E[z^-" + std::to_string(n) + "] diverges for K = " + std::to_string(antennas_) +
            " antennas: the smallest power-sum order equals K, so the gamma factor "
            "Gamma(K - n) must have a positive argument (requires K > n)");
    }
    const double log_rate = std::log(coeffs_.rate());
    double sum = 0.0;
    for (std::size_t s = 0; s < coeff_.size(); ++s) {
        if (coeff_[s] == 0.0) continue;
        const double order = static_cast<double>(antennas_) + static_cast<double>(s) - n;
        sum += coeff_[s] * std::exp(std::lgamma(order) - order * log_rate);
    }
    return sum;
}

double MrtPowerSum::total_mass() const {
    const double log_rate = std::log(coeffs_.rate());
    double sum = 0.0;
    for (std::size_t s = 0; s < coeff_.size(); ++s) {
        if (coeff_[s] == 0.0) continue;
        const double order = static_cast<double>(antennas_) + static_cast<double>(s);
        sum += coeff_[s] * std::exp(std::lgamma(order) - order * log_rate);
    }
    return sum;
}

double mrt_sum_pdf(const SRParams& p, int antennas, double z) {
    return MrtPowerSum(p, antennas).pdf(z);
}

double mrt_sum_pdf(std::span<const SRParams> per_antenna, double z) {
    if (per_antenna.empty()) throw std::domain_error("mrt_sum_pdf: need at least one antenna");
    const SRParams& first = per_antenna.front();
    for (const SRParams& p : per_antenna) {
        if (p.m != first.m || p.b0 != first.b0 || p.omega != first.omega) {
            throw UnsupportedConfigError(
                "mrt_sum_pdf: closed form requires identical per-antenna SR parameters");
        }
    }
    return mrt_sum_pdf(first, static_cast<int>(per_antenna.size()), z);
}

double sr_inverse_moment(const SRParams& p, int antennas, int n) {
    return MrtPowerSum(p, antennas).inverse_moment(n);
}

IGParams ig_from_nakagami(const NakagamiParams& p) {
    p.validate();
    return IGParams{p.m, p.m / p.omega};
}

std::complex<double> sample_sr_gain(const SRParams& p, RandomStream& rng) {
    p.validate();
    // LOS amplitude: Nakagami(m, omega), i.e. A^2 ~ Gamma(shape m, mean omega).
    const double a = std::sqrt(rng.gamma(static_cast<double>(p.m), p.omega / p.m));
    const double theta = kTwoPi * rng.uniform01();
    const std::complex<double> los{a * std::cos(theta), a * std::sin(theta)};
    return los + rng.circular_normal(2.0 * p.b0);
}

double sample_nakagami_power(const NakagamiParams& p, RandomStream& rng) {
    p.validate();
    return rng.gamma(p.m, p.omega / p.m);
}

}  // namespace otfsop::fading
