#pragma once

// Shared helpers for the test suites: tolerances, test-only statistical
// oracles (digamma, gamma maximum likelihood), and a tiny process runner for
// CLI-level tests.

#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace testsupport {

inline double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
    double se = 0.0;  // standard error of the mean
};

inline MeanSd mean_sd(std::span<const double> xs) {
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (const double x : xs) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    return {mean, sd, sd / std::sqrt(n)};
}

// Digamma by recurrence + asymptotic series; plenty for MLE fitting.
inline double digamma(double x) {
    double r = 0.0;
    while (x < 6.0) {
        r -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    return r + std::log(x) - 0.5 * inv -
           inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 / 252.0));
}

// Gamma(shape, scale) maximum likelihood on positive samples: Minka's
// initialization plus Newton steps on log(shape) for
// log(shape) - digamma(shape) = log(mean) - mean(log).
struct GammaFit {
    double shape = 0.0;
    double scale = 0.0;
};

inline GammaFit gamma_mle(std::span<const double> xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    double mean_log = 0.0;
    for (const double x : xs) {
        if (!(x > 0.0)) throw std::domain_error("gamma_mle: samples must be positive");
        mean += x;
        mean_log += std::log(x);
    }
    mean /= n;
    mean_log /= n;
    const double s = std::log(mean) - mean_log;
    double shape = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
    for (int it = 0; it < 40; ++it) {
        const double f = std::log(shape) - digamma(shape) - s;
        const double h = 1e-6 * shape;
        const double fp = (std::log(shape + h) - digamma(shape + h) - s - f) / h;
        const double step = f / fp;
        shape -= step;
        if (std::fabs(step) < 1e-12 * shape) break;
    }
    return {shape, mean / shape};
}

// Runs a command, captures combined stdout+stderr, returns the exit code.
inline int run_process(const std::string& command, std::string* output = nullptr) {
    const std::string full = command + " 2>&1";
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed for: " + command);
    std::string captured;
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe)) {
        captured += buf.data();
    }
    const int status = pclose(pipe);
    if (output) *output = captured;
    if (status < 0) throw std::runtime_error("pclose failed for: " + command);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

inline std::string read_file(const std::string& path) {
    FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), f)) > 0) {
        out.append(buf.data(), got);
    }
    std::fclose(f);
    return out;
}

}  // namespace testsupport
