#pragma once

// OTFS frame machinery: ISFFT/SFFT between the delay-Doppler and
// time-frequency grids, sparse delay-Doppler channels, per-bin frequency
// gains, ZF equalization, MRT weighting, and the noise-enhancement statistic
// phi.
//
// Conventions (frozen, everything below depends on them):
//   * Grids are N x M: N Doppler bins (index n or k), M delay bins (m or l).
//   * Vectorization is Doppler-major: entry (n, m) sits at flat index n*M + m,
//     matching the stacking x = [x_0^T ... x_{N-1}^T]^T with
//     x_n = [x[n,0] ... x[n,M-1]].
//   * The bin domain diagonalizing the channel is reached by the unitary
//     sandwich (F_N (x) F_M^H): a forward DFT along Doppler and an inverse
//     DFT along delay. Bin (k, l) sits at flat index k*M + l.
//   * Delay/Doppler taps are integers; with ideal bi-orthogonal pulses the
//     induced channel matrix is exactly block circulant and the sandwich
//     diagonalizes it.

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "otfsop/errors.hpp"
#include "otfsop/random.hpp"

namespace otfsop::otfs {

using Complex = std::complex<double>;

struct Grid {
    int n_doppler = 1;  // N
    int m_delay = 1;    // M
    std::optional<double> symbol_period;       // T, seconds
    std::optional<double> subcarrier_spacing;  // delta-f, hertz

    void validate() const;  // N, M >= 1; T * delta_f == 1 when both set
    int bins() const { return n_doppler * m_delay; }
    friend bool operator==(const Grid&, const Grid&) = default;
};

// Delay-Doppler data frame; entry (n, m) = values[n * M + m].
struct DDFrame {
    int n_doppler = 0;
    int m_delay = 0;
    std::vector<Complex> values;

    static DDFrame zeros(const Grid& grid);
    Complex& at(int n, int m) { return values[static_cast<std::size_t>(n) * m_delay + m]; }
    const Complex& at(int n, int m) const {
        return values[static_cast<std::size_t>(n) * m_delay + m];
    }
    int size() const { return n_doppler * m_delay; }
};

// Time-frequency frame; entry (k, l) = values[k * M + l] with time index k
// and subcarrier index l (the textbook X_tf[l, k] transposed into row-major
// storage).
struct TFFrame {
    int n_doppler = 0;
    int m_delay = 0;
    std::vector<Complex> values;

    Complex& at(int k, int l) { return values[static_cast<std::size_t>(k) * m_delay + l]; }
    const Complex& at(int k, int l) const {
        return values[static_cast<std::size_t>(k) * m_delay + l];
    }
    int size() const { return n_doppler * m_delay; }
};

// One sparse channel path with integer taps.
struct DDPath {
    int delay_tap = 0;    // in [0, M)
    int doppler_tap = 0;  // in [0, N)
    Complex gain{1.0, 0.0};
};

// Per-bin frequency-domain channel gains D^{k,l}; entry (k, l) at k * M + l,
// the (k*M + l)-th diagonal element of the diagonalized channel.
struct BinGainGrid {
    int n_doppler = 0;
    int m_delay = 0;
    std::vector<Complex> gains;

    Complex& at(int k, int l) { return gains[static_cast<std::size_t>(k) * m_delay + l]; }
    const Complex& at(int k, int l) const {
        return gains[static_cast<std::size_t>(k) * m_delay + l];
    }
    int size() const { return n_doppler * m_delay; }
};

// Large-scale link parameters: distance, path-loss exponent, transmit power.
struct LinkGain {
    double distance = 1.0;
    double pathloss_exp = 2.0;
    double tx_power = 1.0;

    void validate() const;
    double amplitude() const;  // sqrt(tx_power / distance^pathloss_exp)
};

// ISFFT: delay-Doppler -> time-frequency, scaled by sqrt(tx_power).
//   X_tf[k, l] = sqrt(Ps / (N M)) sum_{n,m} x[n, m] e^{j2pi(nk/N - ml/M)}
TFFrame isfft(const DDFrame& x, double tx_power);

// SFFT: time-frequency -> delay-Doppler; exact inverse of isfft up to the
// sqrt(tx_power) factor.
DDFrame sfft(const TFFrame& y_tf);

// D^{k,l} = sum_p g_p e^{j2pi l m_p / M} e^{-j2pi k n_p / N}: the 2-D
// transform of the sparse first column of the block-circulant channel.
BinGainGrid bin_gains_from_paths(std::span<const DDPath> paths, const Grid& grid);

// y = sqrt(Ps / d^alpha) H x + w, realized as transform -> per-bin multiply ->
// inverse transform; w is i.i.d. circular Gaussian with per-entry power
// noise_power.
DDFrame apply_dd_channel(const DDFrame& x, std::span<const DDPath> paths,
                         const LinkGain& link, double noise_power, RandomStream& rng);

// Zero-forcing equalizer Theta = (F_N^H (x) F_M) D^{-1} (F_N (x) F_M^H),
// applied through per-dimension FFTs. Throws SingularChannelError naming the
// first (k, l) whose gain is exactly zero or below 1e-12 of the peak.
DDFrame zf_equalize(const DDFrame& y, const BinGainGrid& d_grid);

// Noise-enhancement statistic phi = (1/NM) sum_{k,l} |D^{k,l}|^-2.
double phi_zf(const BinGainGrid& d_grid);

// MRT weights w_i^{k,l} = (D_i^{k,l})^H / sqrt(sum_k |D_k^{k,l}|^2), one grid
// per antenna, unit weight-vector norm per bin.
std::vector<std::vector<Complex>> mrt_weights(std::span<const BinGainGrid> d_grids);

// Effective combined channel after MRT: real, nonnegative per-bin gain
// sqrt(sum_k |D_k^{k,l}|^2).
BinGainGrid mrt_combined_gains(std::span<const BinGainGrid> d_grids);

// phi of the MRT-combined channel, (1/NM) sum_{k,l} 1 / sum_k |D_k^{k,l}|^2.
double phi_mrt(std::span<const BinGainGrid> d_grids);

// Post-equalization SNR: gamma = Ps / (sigma^2 * phi * d^alpha).
double snr_from_phi(double phi, const LinkGain& link, double noise_power);

}  // namespace otfsop::otfs
