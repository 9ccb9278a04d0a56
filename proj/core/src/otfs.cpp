#include "otfsop/otfs.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace otfsop::otfs {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kSingularRelTol = 1e-12;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place unscaled transform a[k] = sum_n a[n] e^{sign * j 2pi k n / n}.
// Radix-2 when the length is a power of two, direct evaluation otherwise
// (grid dimensions are small).
void dft_inplace(std::vector<Complex>& a, int sign) {
    const int n = static_cast<int>(a.size());
    if (n <= 1) return;
    if (is_pow2(n)) {
        // Bit-reversal permutation.
        for (int i = 1, j = 0; i < n; ++i) {
            int bit = n >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
            if (i < j) std::swap(a[static_cast<std::size_t>(i)], a[static_cast<std::size_t>(j)]);
        }
        for (int len = 2; len <= n; len <<= 1) {
            const double ang = sign * kTwoPi / len;
            const Complex wl{std::cos(ang), std::sin(ang)};
            for (int i = 0; i < n; i += len) {
                Complex w{1.0, 0.0};
                for (int j = 0; j < len / 2; ++j) {
                    const Complex u = a[static_cast<std::size_t>(i + j)];
                    const Complex v = a[static_cast<std::size_t>(i + j + len / 2)] * w;
                    a[static_cast<std::size_t>(i + j)] = u + v;
                    a[static_cast<std::size_t>(i + j + len / 2)] = u - v;
                    w *= wl;
                }
            }
        }
        return;
    }
    std::vector<Complex> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        Complex acc{0.0, 0.0};
        for (int i = 0; i < n; ++i) {
            const double ang = sign * kTwoPi * k * i / n;
            acc += a[static_cast<std::size_t>(i)] * Complex{std::cos(ang), std::sin(ang)};
        }
        out[static_cast<std::size_t>(k)] = acc;
    }
    a = std::move(out);
}

// Transform every length-N column (fixed m, varying n) and every length-M row
// of an N x M grid; doppler_sign / delay_sign select the kernel direction per
// dimension. Scaling is applied by the caller.
void transform_2d(std::vector<Complex>& v, int n_doppler, int m_delay, int doppler_sign,
                  int delay_sign) {
    std::vector<Complex> col(static_cast<std::size_t>(n_doppler));
    for (int m = 0; m < m_delay; ++m) {
        for (int n = 0; n < n_doppler; ++n)
            col[static_cast<std::size_t>(n)] = v[static_cast<std::size_t>(n) * m_delay + m];
        dft_inplace(col, doppler_sign);
        for (int n = 0; n < n_doppler; ++n)
            v[static_cast<std::size_t>(n) * m_delay + m] = col[static_cast<std::size_t>(n)];
    }
    std::vector<Complex> row(static_cast<std::size_t>(m_delay));
    for (int n = 0; n < n_doppler; ++n) {
        for (int m = 0; m < m_delay; ++m)
            row[static_cast<std::size_t>(m)] = v[static_cast<std::size_t>(n) * m_delay + m];
        dft_inplace(row, delay_sign);
        for (int m = 0; m < m_delay; ++m)
            v[static_cast<std::size_t>(n) * m_delay + m] = row[static_cast<std::size_t>(m)];
    }
}

// (F_N (x) F_M^H) x, unitary: forward along Doppler, inverse along delay.
std::vector<Complex> dd_to_bins(const std::vector<Complex>& x, int n_doppler, int m_delay) {
    std::vector<Complex> v = x;
    transform_2d(v, n_doppler, m_delay, -1, +1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_doppler) * m_delay);
    for (Complex& z : v) z *= scale;
    return v;
}

// (F_N^H (x) F_M) x, the inverse of dd_to_bins.
std::vector<Complex> bins_to_dd(const std::vector<Complex>& x, int n_doppler, int m_delay) {
    std::vector<Complex> v = x;
    transform_2d(v, n_doppler, m_delay, +1, -1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_doppler) * m_delay);
    for (Complex& z : v) z *= scale;
    return v;
}

void check_frame(const DDFrame& x) {
    if (x.n_doppler < 1 || x.m_delay < 1 ||
        x.values.size() != static_cast<std::size_t>(x.n_doppler) * x.m_delay) {
        throw std::domain_error("otfs: frame shape is inconsistent with its storage");
    }
}

void check_paths(std::span<const DDPath> paths, int n_doppler, int m_delay) {
    if (paths.empty()) throw std::domain_error("otfs: channel needs at least one path");
    for (const DDPath& p : paths) {
        if (p.delay_tap < 0 || p.delay_tap >= m_delay || p.doppler_tap < 0 ||
            p.doppler_tap >= n_doppler) {
            throw std::domain_error("otfs: path tap outside the grid");
        }
    }
}

double peak_magnitude(std::span<const BinGainGrid> grids) {
    double peak = 0.0;
    for (const BinGainGrid& g : grids)
        for (const Complex& z : g.gains) peak = std::max(peak, std::abs(z));
    return peak;
}

[[noreturn]] void singular_bin(int k, int l) {
    throw SingularChannelError(
        k, l,
        "singular channel: bin gain at (doppler " + std::to_string(k) + ", delay " +
            std::to_string(l) + ") is zero (or below 1e-12 of the peak); ZF is undefined");
}

// First bin (k, l) whose magnitude is at or below the singularity threshold.
void check_nonsingular(const BinGainGrid& g) {
    const double peak = peak_magnitude(std::span<const BinGainGrid>(&g, 1));
    const double floor = peak * kSingularRelTol;
    for (int k = 0; k < g.n_doppler; ++k) {
        for (int l = 0; l < g.m_delay; ++l) {
            if (std::abs(g.at(k, l)) <= floor) singular_bin(k, l);
        }
    }
}

}  // namespace

void Grid::validate() const {
    if (n_doppler < 1 || m_delay < 1)
        throw std::domain_error("Grid: N and M must be >= 1");
    if (symbol_period && !(*symbol_period > 0.0))
        throw std::domain_error("Grid: symbol_period must be > 0");
    if (subcarrier_spacing && !(*subcarrier_spacing > 0.0))
        throw std::domain_error("Grid: subcarrier_spacing must be > 0");
    if (symbol_period && subcarrier_spacing &&
        std::fabs(*symbol_period * *subcarrier_spacing - 1.0) > 1e-9) {
        throw std::domain_error("Grid: symbol_period * subcarrier_spacing must equal 1");
    }
}

DDFrame DDFrame::zeros(const Grid& grid) {
    grid.validate();
    DDFrame f;
    f.n_doppler = grid.n_doppler;
    f.m_delay = grid.m_delay;
    f.values.assign(static_cast<std::size_t>(grid.bins()), Complex{0.0, 0.0});
    return f;
}

void LinkGain::validate() const {
    if (!(distance > 0.0) || !(pathloss_exp > 0.0) || !(tx_power > 0.0))
        throw std::domain_error("LinkGain: distance, pathloss_exp, tx_power must be > 0");
}

double LinkGain::amplitude() const {
    validate();
    return std::sqrt(tx_power / std::pow(distance, pathloss_exp));
}

TFFrame isfft(const DDFrame& x, double tx_power) {
    check_frame(x);
    if (!(tx_power > 0.0)) throw std::domain_error("isfft: tx_power must be > 0");
    const int N = x.n_doppler;
    const int M = x.m_delay;
    TFFrame out;
    out.n_doppler = N;
    out.m_delay = M;
    out.values = x.values;
    // e^{+j2pi nk/N} along Doppler, e^{-j2pi ml/M} along delay.
    transform_2d(out.values, N, M, +1, -1);
    const double scale = std::sqrt(tx_power) / std::sqrt(static_cast<double>(N) * M);
    for (Complex& z : out.values) z *= scale;
    return out;
}

DDFrame sfft(const TFFrame& y_tf) {
    if (y_tf.n_doppler < 1 || y_tf.m_delay < 1 ||
        y_tf.values.size() != static_cast<std::size_t>(y_tf.n_doppler) * y_tf.m_delay) {
        throw std::domain_error("sfft: frame shape is inconsistent with its storage");
    }
    const int N = y_tf.n_doppler;
    const int M = y_tf.m_delay;
    DDFrame out;
    out.n_doppler = N;
    out.m_delay = M;
    out.values = y_tf.values;
    transform_2d(out.values, N, M, -1, +1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(N) * M);
    for (Complex& z : out.values) z *= scale;
    return out;
}

BinGainGrid bin_gains_from_paths(std::span<const DDPath> paths, const Grid& grid) {
    grid.validate();
    check_paths(paths, grid.n_doppler, grid.m_delay);
    const int N = grid.n_doppler;
    const int M = grid.m_delay;
    BinGainGrid g;
    g.n_doppler = N;
    g.m_delay = M;
    g.gains.assign(static_cast<std::size_t>(N) * M, Complex{0.0, 0.0});
    for (const DDPath& p : paths) {
        for (int k = 0; k < N; ++k) {
            for (int l = 0; l < M; ++l) {
                const double ang =
                    kTwoPi * (static_cast<double>(l) * p.delay_tap / M -
                              static_cast<double>(k) * p.doppler_tap / N);
                g.at(k, l) += p.gain * Complex{std::cos(ang), std::sin(ang)};
            }
        }
    }
    return g;
}

DDFrame apply_dd_channel(const DDFrame& x, std::span<const DDPath> paths, const LinkGain& link,
                         double noise_power, RandomStream& rng) {
    check_frame(x);
    if (!(noise_power >= 0.0)) throw std::domain_error("apply_dd_channel: noise_power must be >= 0");
    Grid grid{x.n_doppler, x.m_delay, {}, {}};
    const BinGainGrid d = bin_gains_from_paths(paths, grid);

    std::vector<Complex> freq = dd_to_bins(x.values, x.n_doppler, x.m_delay);
    for (std::size_t i = 0; i < freq.size(); ++i) freq[i] *= d.gains[i];
    DDFrame y;
    y.n_doppler = x.n_doppler;
    y.m_delay = x.m_delay;
    y.values = bins_to_dd(freq, x.n_doppler, x.m_delay);

    const double amp = link.amplitude();
    for (Complex& z : y.values) z *= amp;
    if (noise_power > 0.0) {
        for (Complex& z : y.values) z += rng.circular_normal(noise_power);
    }
    return y;
}

DDFrame zf_equalize(const DDFrame& y, const BinGainGrid& d_grid) {
    check_frame(y);
    if (y.n_doppler != d_grid.n_doppler || y.m_delay != d_grid.m_delay)
        throw std::domain_error("zf_equalize: frame and gain grid shapes differ");
    check_nonsingular(d_grid);

    std::vector<Complex> freq = dd_to_bins(y.values, y.n_doppler, y.m_delay);
    for (std::size_t i = 0; i < freq.size(); ++i) freq[i] /= d_grid.gains[i];
    DDFrame out;
    out.n_doppler = y.n_doppler;
    out.m_delay = y.m_delay;
    out.values = bins_to_dd(freq, y.n_doppler, y.m_delay);
    return out;
}

double phi_zf(const BinGainGrid& d_grid) {
    check_nonsingular(d_grid);
    double sum = 0.0;
    for (const Complex& z : d_grid.gains) sum += 1.0 / std::norm(z);
    return sum / d_grid.size();
}

std::vector<std::vector<Complex>> mrt_weights(std::span<const BinGainGrid> d_grids) {
    if (d_grids.empty()) throw std::domain_error("mrt_weights: need at least one antenna grid");
    const int N = d_grids.front().n_doppler;
    const int M = d_grids.front().m_delay;
    for (const BinGainGrid& g : d_grids) {
        if (g.n_doppler != N || g.m_delay != M)
            throw std::domain_error("mrt_weights: antenna grids have differing shapes");
    }
    const double peak = peak_magnitude(d_grids);
    const double floor2 = (peak * kSingularRelTol) * (peak * kSingularRelTol);

    std::vector<std::vector<Complex>> w(d_grids.size(),
                                        std::vector<Complex>(static_cast<std::size_t>(N) * M));
    for (int k = 0; k < N; ++k) {
        for (int l = 0; l < M; ++l) {
            double s = 0.0;
            for (const BinGainGrid& g : d_grids) s += std::norm(g.at(k, l));
            if (s <= floor2) singular_bin(k, l);
            const double inv = 1.0 / std::sqrt(s);
            for (std::size_t i = 0; i < d_grids.size(); ++i) {
                w[i][static_cast<std::size_t>(k) * M + l] = std::conj(d_grids[i].at(k, l)) * inv;
            }
        }
    }
    return w;
}

BinGainGrid mrt_combined_gains(std::span<const BinGainGrid> d_grids) {
    if (d_grids.empty())
        throw std::domain_error("mrt_combined_gains: need at least one antenna grid");
    const int N = d_grids.front().n_doppler;
    const int M = d_grids.front().m_delay;
    for (const BinGainGrid& g : d_grids) {
        if (g.n_doppler != N || g.m_delay != M)
            throw std::domain_error("mrt_combined_gains: antenna grids have differing shapes");
    }
    BinGainGrid out;
    out.n_doppler = N;
    out.m_delay = M;
    out.gains.assign(static_cast<std::size_t>(N) * M, Complex{0.0, 0.0});
    for (int k = 0; k < N; ++k) {
        for (int l = 0; l < M; ++l) {
            double s = 0.0;
            for (const BinGainGrid& g : d_grids) s += std::norm(g.at(k, l));
            out.at(k, l) = Complex{std::sqrt(s), 0.0};
        }
    }
    return out;
}

double phi_mrt(std::span<const BinGainGrid> d_grids) {
    if (d_grids.empty()) throw std::domain_error("phi_mrt: need at least one antenna grid");
    const int N = d_grids.front().n_doppler;
    const int M = d_grids.front().m_delay;
    for (const BinGainGrid& g : d_grids) {
        if (g.n_doppler != N || g.m_delay != M)
            throw std::domain_error("phi_mrt: antenna grids have differing shapes");
    }
    const double peak = peak_magnitude(d_grids);
    const double floor2 = (peak * kSingularRelTol) * (peak * kSingularRelTol);
    double sum = 0.0;
    for (int k = 0; k < N; ++k) {
        for (int l = 0; l < M; ++l) {
            double s = 0.0;
            for (const BinGainGrid& g : d_grids) s += std::norm(g.at(k, l));
            if (s <= floor2) singular_bin(k, l);
            sum += 1.0 / s;
        }
    }
    return sum / (static_cast<double>(N) * M);
}

double snr_from_phi(double phi, const LinkGain& link, double noise_power) {
    if (!(phi > 0.0)) throw std::domain_error("snr_from_phi: phi must be > 0");
    if (!(noise_power > 0.0)) throw std::domain_error("snr_from_phi: noise_power must be > 0");
    link.validate();
    return link.tx_power / (noise_power * phi * std::pow(link.distance, link.pathloss_exp));
}

}  // namespace otfsop::otfs
