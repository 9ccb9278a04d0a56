#include "cli/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace otfsop::cli {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double simpson_panel(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double& fm) {
    const double m = 0.5 * (a + b);
    fm = f(m);
    return (b - a) * (fa + 4.0 * fm + fb) / 6.0;
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double m, double fm, double whole, double abs_tol, int depth) {
    double fl = 0.0;
    double fr = 0.0;
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double left = simpson_panel(f, a, fa, m, fm, fl);
    const double right = simpson_panel(f, m, fm, b, fb, fr);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * abs_tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_step(f, a, fa, m, fm, lm, fl, left, abs_tol / 2.0, depth - 1) +
           adaptive_step(f, m, fm, b, fb, rm, fr, right, abs_tol / 2.0, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    double fm = 0.0;
    const double whole = simpson_panel(f, a, fa, b, fb, fm);
    return adaptive_step(f, a, fa, b, fb, 0.5 * (a + b), fm, whole, abs_tol, max_depth);
}

double integrate_semi_inf(const std::function<double(double)>& f, double scale_hint,
                          double abs_tol) {
    if (!(scale_hint > 0.0)) throw std::domain_error("integrate_semi_inf: scale_hint must be > 0");
    double lo = 0.0;
    double width = scale_hint;
    double total = 0.0;
    for (int panel = 0; panel < 200; ++panel) {
        const double part = adaptive_simpson(f, lo, lo + width, abs_tol / 8.0);
        total += part;
        lo += width;
        if (panel >= 3) width *= 2.0;
        if (panel >= 2 && std::fabs(part) < abs_tol) break;
    }
    return total;
}

double normal_tail_quadrature(double x) {
    if (x < 0.0) return 1.0 - normal_tail_quadrature(-x);
    // Q(x) = phi(x) * integral_0^inf exp(-x u - u^2/2) du; the integrand is
    // O(1) so the quadrature works at any x.
    const double upper = -x + std::sqrt(x * x + 140.0);
    const auto integrand = [x](double u) { return std::exp(-x * u - 0.5 * u * u); };
    const double integral = adaptive_simpson(integrand, 0.0, upper, 1e-14);
    const double phi = std::exp(-0.5 * x * x) / std::sqrt(kTwoPi);
    return phi * integral;
}

double gamma_lower_quadrature(double a, double x) {
    if (!(a >= 1.0)) throw std::domain_error("gamma_lower_quadrature: needs a >= 1");
    if (!(x >= 0.0)) throw std::domain_error("gamma_lower_quadrature: needs x >= 0");
    const double lg = std::lgamma(a);
    const auto density = [a, lg](double t) {
        if (t <= 0.0) return a == 1.0 ? std::exp(-lg) : 0.0;
        return std::exp((a - 1.0) * std::log(t) - t - lg);
    };
    return adaptive_simpson(density, 0.0, x, 1e-14);
}

double hyp1f1_direct_series(int m, double x, int terms) {
    if (m < 1) throw std::domain_error("hyp1f1_direct_series: needs m >= 1");
    // 1F1(m; 1; x) = sum_k (m)_k x^k / (k!)^2
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= terms; ++k) {
        term *= (static_cast<double>(m) + k - 1.0) * x / (static_cast<double>(k) * k);
        sum += term;
    }
    return sum;
}

CMat CMat::zeros(int r, int c) {
    CMat m;
    m.rows = r;
    m.cols = c;
    m.v.assign(static_cast<std::size_t>(r) * c, {0.0, 0.0});
    return m;
}

CMat CMat::identity(int n) {
    CMat m = zeros(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = {1.0, 0.0};
    return m;
}

CMat CMat::dft(int n) {
    CMat m = zeros(n, n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            const double ang = -kTwoPi * k * j / n;
            m.at(k, j) = {s * std::cos(ang), s * std::sin(ang)};
        }
    }
    return m;
}

CMat CMat::diag(std::span<const std::complex<double>> d) {
    CMat m = zeros(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

CMat CMat::adjoint() const {
    CMat m = zeros(cols, rows);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m.at(c, r) = std::conj(at(r, c));
    return m;
}

CMat matmul(const CMat& a, const CMat& b) {
    if (a.cols != b.rows) throw std::domain_error("matmul: shape mismatch");
    CMat m = CMat::zeros(a.rows, b.cols);
    for (int r = 0; r < a.rows; ++r) {
        for (int k = 0; k < a.cols; ++k) {
            const std::complex<double> ark = a.at(r, k);
            if (ark == std::complex<double>{0.0, 0.0}) continue;
            for (int c = 0; c < b.cols; ++c) m.at(r, c) += ark * b.at(k, c);
        }
    }
    return m;
}

CMat kron(const CMat& a, const CMat& b) {
    CMat m = CMat::zeros(a.rows * b.rows, a.cols * b.cols);
    for (int ra = 0; ra < a.rows; ++ra)
        for (int ca = 0; ca < a.cols; ++ca)
            for (int rb = 0; rb < b.rows; ++rb)
                for (int cb = 0; cb < b.cols; ++cb)
                    m.at(ra * b.rows + rb, ca * b.cols + cb) = a.at(ra, ca) * b.at(rb, cb);
    return m;
}

std::vector<std::complex<double>> matvec(const CMat& a,
                                         std::span<const std::complex<double>> x) {
    if (a.cols != static_cast<int>(x.size())) throw std::domain_error("matvec: shape mismatch");
    std::vector<std::complex<double>> y(static_cast<std::size_t>(a.rows), {0.0, 0.0});
    for (int r = 0; r < a.rows; ++r)
        for (int c = 0; c < a.cols; ++c) y[static_cast<std::size_t>(r)] += a.at(r, c) * x[static_cast<std::size_t>(c)];
    return y;
}

std::complex<double> trace(const CMat& a) {
    std::complex<double> t{0.0, 0.0};
    for (int i = 0; i < std::min(a.rows, a.cols); ++i) t += a.at(i, i);
    return t;
}

namespace {

// Dense operators are an oracle path for small instances only.
void check_oracle_size(int bins) {
    if (bins > 64) {
        throw std::domain_error("dense channel oracle is gated to N*M <= 64");
    }
}

}  // namespace

CMat block_circulant_from_paths(std::span<const otfs::DDPath> paths, int n_doppler,
                                int m_delay) {
    const int nm = n_doppler * m_delay;
    check_oracle_size(nm);
    CMat h = CMat::zeros(nm, nm);
    for (const otfs::DDPath& p : paths) {
        for (int n = 0; n < n_doppler; ++n) {
            for (int m = 0; m < m_delay; ++m) {
                const int nr = (n + p.doppler_tap) % n_doppler;
                const int mr = (m + p.delay_tap) % m_delay;
                h.at(nr * m_delay + mr, n * m_delay + m) += p.gain;
            }
        }
    }
    return h;
}

CMat explicit_zf_operator(const otfs::BinGainGrid& d_grid) {
    const int N = d_grid.n_doppler;
    const int M = d_grid.m_delay;
    check_oracle_size(N * M);
    const CMat fn = CMat::dft(N);
    const CMat fm = CMat::dft(M);
    std::vector<std::complex<double>> dinv(d_grid.gains.size());
    for (std::size_t i = 0; i < dinv.size(); ++i) dinv[i] = 1.0 / d_grid.gains[i];
    const CMat analysis = kron(fn, fm.adjoint());
    const CMat synthesis = kron(fn.adjoint(), fm);
    return matmul(synthesis, matmul(CMat::diag(dinv), analysis));
}

double phi_trace_oracle(const otfs::BinGainGrid& d_grid) {
    const int N = d_grid.n_doppler;
    const int M = d_grid.m_delay;
    check_oracle_size(N * M);
    const CMat fn = CMat::dft(N);
    const CMat fm = CMat::dft(M);
    std::vector<std::complex<double>> dinv(d_grid.gains.size());
    std::vector<std::complex<double>> dinv_h(d_grid.gains.size());
    for (std::size_t i = 0; i < dinv.size(); ++i) {
        dinv[i] = 1.0 / d_grid.gains[i];
        dinv_h[i] = std::conj(dinv[i]);
    }
    const CMat analysis = kron(fn, fm.adjoint());
    const CMat synthesis = kron(fn.adjoint(), fm);
    const CMat cov =
        matmul(synthesis, matmul(CMat::diag(dinv), matmul(CMat::diag(dinv_h), analysis)));
    return trace(cov).real() / (static_cast<double>(N) * M);
}

}  // namespace otfsop::cli
