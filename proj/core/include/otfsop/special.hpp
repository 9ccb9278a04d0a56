#pragma once

// Scalar special functions backing the closed-form outage expressions:
// Gaussian tail, regularized incomplete gammas, log-gamma, beta, Pochhammer,
// and the finite confluent-hypergeometric series for integer first argument.
//
// All functions are pure and deterministic; no internal caching.

namespace otfsop::special {

// Accuracy contract for series / continued-fraction evaluation.
struct EvalTolerance {
    double rel_tol = 1e-14;
    double abs_tol = 1e-300;
    int max_terms = 10000;

    void validate() const;  // rel_tol > 0, abs_tol > 0, max_terms >= 1
};

// log Gamma(x), x > 0.
double log_gamma(double x);

// Tail distribution of the standard normal, Pr(Z > x).
// Strictly decreasing; q_function(x) + q_function(-x) == 1.
double q_function(double x);

// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a),
// a > 0, x >= 0. Series for x < a + 1, continued fraction otherwise.
double reg_gamma_lower(double a, double x, const EvalTolerance& tol = {});

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x). Both conventions
// are exposed explicitly so callers pick the tail they mean.
double reg_gamma_upper(double a, double x, const EvalTolerance& tol = {});

// Rising factorial a (a+1) ... (a+k-1); pochhammer(a, 0) == 1.
// For integer m >= 1, pochhammer(1 - m, k) == 0 exactly once k >= m.
double pochhammer(double a, int k);

// Confluent hypergeometric 1F1(m; 1; x) for integer m >= 1 and x >= 0,
// via the finite series exp(x) * sum_{k=0}^{m-1} (-1)^k (1-m)_k x^k / (k!)^2.
double hyp1f1_int(int m, double x);

// Beta function Gamma(a) Gamma(b) / Gamma(a + b), a > 0, b > 0.
double beta_fn(double a, double b);

}  // namespace otfsop::special
