#include "otfsop/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace otfsop::special {

namespace {

[[noreturn]] void domain_fail(const std::string& msg) {
    throw std::domain_error("special: " + msg);
}

// Lower regularized gamma by its power series, valid/fast for x < a + 1.
double gamma_series(double a, double x, const EvalTolerance& tol) {
    const double lg = log_gamma(a);
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 0; n < tol.max_terms; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * tol.rel_tol + tol.abs_tol) {
            return sum * std::exp(-x + a * std::log(x) - lg);
        }
    }
    throw std::runtime_error("special: incomplete gamma series did not converge");
}

// Upper regularized gamma by modified Lentz continued fraction, for x >= a + 1.
double gamma_cont_fraction(double a, double x, const EvalTolerance& tol) {
    const double lg = log_gamma(a);
    const double fpmin = std::numeric_limits<double>::min() / tol.rel_tol;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= tol.max_terms; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < tol.rel_tol) {
            return std::exp(-x + a * std::log(x) - lg) * h;
        }
    }
    throw std::runtime_error("special: incomplete gamma continued fraction did not converge");
}

void check_gamma_args(double a, double x, const EvalTolerance& tol) {
    tol.validate();
    if (!(a > 0.0) || !std::isfinite(a)) domain_fail("incomplete gamma requires a > 0");
    if (!(x >= 0.0) || !std::isfinite(x)) domain_fail("incomplete gamma requires x >= 0");
}

}  // namespace

void EvalTolerance::validate() const {
    if (!(rel_tol > 0.0)) throw std::domain_error("EvalTolerance: rel_tol must be > 0");
    if (!(abs_tol > 0.0)) throw std::domain_error("EvalTolerance: abs_tol must be > 0");
    if (max_terms < 1) throw std::domain_error("EvalTolerance: max_terms must be >= 1");
}

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) domain_fail("log_gamma requires x > 0");
    return std::lgamma(x);
}

double q_function(double x) {
    if (!std::isfinite(x)) domain_fail("q_function requires finite x");
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

double reg_gamma_lower(double a, double x, const EvalTolerance& tol) {
    check_gamma_args(a, x, tol);
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_series(a, x, tol);
    return 1.0 - gamma_cont_fraction(a, x, tol);
}

double reg_gamma_upper(double a, double x, const EvalTolerance& tol) {
    check_gamma_args(a, x, tol);
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_series(a, x, tol);
    return gamma_cont_fraction(a, x, tol);
}

double pochhammer(double a, int k) {
    if (k < 0) domain_fail("pochhammer requires k >= 0");
    double prod = 1.0;
    for (int i = 0; i < k; ++i) {
        prod *= a + static_cast<double>(i);
    }
    return prod;
}

double hyp1f1_int(int m, double x) {
    if (m < 1) domain_fail("hyp1f1_int requires integer m >= 1");
    if (!(x >= 0.0) || !std::isfinite(x)) domain_fail("hyp1f1_int requires x >= 0");
    // (-1)^k (1-m)_k / (k!)^2 = C(m-1, k) / k!, so every term is nonnegative;
    // compensated accumulation still guards long sums for large m*x.
    double term = 1.0;
    double sum = 1.0;
    double comp = 0.0;
    for (int k = 1; k < m; ++k) {
        term *= static_cast<double>(m - k) * x / (static_cast<double>(k) * k);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return std::exp(x) * sum;
}

double beta_fn(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) domain_fail("beta_fn requires a > 0 and b > 0");
    return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

}  // namespace otfsop::special
