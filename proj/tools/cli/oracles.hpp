#pragma once

// Independent numerical oracles for the validation suite: adaptive
// quadrature, direct series, and explicit dense-matrix forms of the channel
// operators. Nothing here shares code with the closed-form / FFT paths it
// checks; that independence is the point.

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "otfsop/otfs.hpp"

namespace otfsop::cli {

// Recursive adaptive Simpson with Richardson correction; abs_tol is the
// absolute error target on [a, b].
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth = 60);

// Integral over [0, inf) by geometrically growing panels of width scale_hint;
// stops once a panel contributes less than abs_tol.
double integrate_semi_inf(const std::function<double(double)>& f, double scale_hint,
                          double abs_tol);

// High-accuracy standard normal tail by quadrature of
// phi(x) * integral_0^inf exp(-x u - u^2 / 2) du (x >= 0; reflection below).
double normal_tail_quadrature(double x);

// Regularized lower incomplete gamma by adaptive quadrature of the density,
// for a >= 1.
double gamma_lower_quadrature(double a, double x);

// 1F1(m; 1; x) by direct power-series summation (the infinite series, not the
// finite closed form).
double hyp1f1_direct_series(int m, double x, int terms = 200);

// Dense complex matrices, just big enough for small-instance oracles.
struct CMat {
    int rows = 0;
    int cols = 0;
    std::vector<std::complex<double>> v;

    static CMat zeros(int r, int c);
    static CMat identity(int n);
    static CMat dft(int n);  // unitary: F(k, j) = exp(-j 2 pi k j / n) / sqrt(n)
    static CMat diag(std::span<const std::complex<double>> d);

    std::complex<double>& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
    const std::complex<double>& at(int r, int c) const {
        return v[static_cast<std::size_t>(r) * cols + c];
    }
    CMat adjoint() const;
};

CMat matmul(const CMat& a, const CMat& b);
CMat kron(const CMat& a, const CMat& b);
std::vector<std::complex<double>> matvec(const CMat& a,
                                         std::span<const std::complex<double>> x);
std::complex<double> trace(const CMat& a);

// The NM x NM block-circulant channel matrix induced by integer-tap paths:
// entry ((n' M + m'), (n M + m)) accumulates the gain of every path with
// doppler_tap = (n' - n) mod N and delay_tap = (m' - m) mod M.
CMat block_circulant_from_paths(std::span<const otfs::DDPath> paths, int n_doppler,
                                int m_delay);

// Explicit ZF operator Theta = (F_N^H (x) F_M) diag(D)^-1 (F_N (x) F_M^H).
CMat explicit_zf_operator(const otfs::BinGainGrid& d_grid);

// phi via the explicit covariance trace
// (1/NM) Tr[(F_N^H (x) F_M) D^-1 D^-H (F_N (x) F_M^H)].
double phi_trace_oracle(const otfs::BinGainGrid& d_grid);

}  // namespace otfsop::cli
