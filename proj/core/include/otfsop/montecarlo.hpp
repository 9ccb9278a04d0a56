#pragma once

// Reproducible Monte Carlo engine: samples the per-bin noise-enhancement
// statistic phi under the bin-i.i.d. model the closed forms assume, estimates
// outage probabilities with Wilson intervals, scores distribution fits with
// NMSE / KL, and cross-checks the bin-statistic model against the physical
// frame simulator.
//
// Determinism contract: for a fixed (master_seed, trials) every operation
// returns bit-identical output regardless of the worker count. Trials draw
// from per-trial substreams keyed by (master_seed, operation tag, trial
// index) and are written into their own slots, so reduction order never
// changes.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "otfsop/fading.hpp"
#include "otfsop/otfs.hpp"
#include "otfsop/outage.hpp"

namespace otfsop::mc {

struct Config {
    std::uint64_t trials = 100000;
    std::uint64_t master_seed = 20250801;
    int workers = 1;
    int histogram_bins = 50;

    void validate() const;  // trials >= 1, workers >= 1, histogram_bins >= 10
    friend bool operator==(const Config&, const Config&) = default;
};

// Binomial point estimate with a two-sided 95% Wilson interval.
struct OPEstimate {
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t trials = 0;
};

struct FitMetrics {
    double nmse = 0.0;
    double kl = 0.0;
    int bins = 0;
    double support_lo = 0.0;
    double support_hi = 0.0;
};

// Wilson score interval for `successes` out of `n` at normal quantile z
// (1.96 for 95%, 2.576 for 99%).
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t n, double z);

// phi_sr samples: per trial, N*M independent bin sums rho = sum_K |h_i|^2 of
// shadowed-Rician gains; phi = (1/NM) sum 1/rho.
std::vector<double> sim_phi_sr(const fading::SRParams& p, int antennas, const otfs::Grid& grid,
                               const Config& cfg);

struct PhiRdSamples {
    std::vector<double> samples;
    // Set when the Nakagami shape is <= 1: E[phi_rd] does not exist, samples
    // are still valid draws.
    bool mean_undefined = false;
};

// phi_rd samples: per trial, N*M i.i.d. Nakagami powers; phi = mean of the
// inverses.
PhiRdSamples sim_phi_rd(const fading::NakagamiParams& p, const otfs::Grid& grid,
                        const Config& cfg);

// Outage estimate: fraction of samples with phi >= budget.phi_threshold().
OPEstimate mc_outage(std::span<const double> phi_samples, const outage::LinkBudget& budget);

// Paired end-to-end estimate: trial fails if either link crosses its
// threshold. Sample sequences must have equal length.
OPEstimate mc_outage_e2e(std::span<const double> phi1, std::span<const double> phi2,
                         const outage::LinkBudget& budget1, const outage::LinkBudget& budget2);

// Histogram-based fit metrics on the [0.1%, 99.9%] sample quantile range with
// cfg.histogram_bins equal-width bins.
//   NMSE = sum (p_hat_b - p_b)^2 / sum p_hat_b^2  over bin densities,
//   KL   = sum m_hat_b log(m_hat_b / m_b)         over bin masses,
// model masses normalized over the support and floored at 1e-12.
FitMetrics fit_metrics(std::span<const double> samples,
                       const std::function<double(double)>& model_pdf, const Config& cfg);

// Densities evaluated by fit_metrics, exposed for plot-ready output.
struct HistogramFit {
    std::vector<double> edges;              // bins + 1 edges
    std::vector<double> empirical_density;  // per bin
    std::vector<double> model_density;      // bin-averaged model density
    FitMetrics metrics;
};

HistogramFit histogram_fit(std::span<const double> samples,
                           const std::function<double(double)>& model_pdf, const Config& cfg);

// Frame-level consistency: phi from the closed bin formulas vs the empirical
// per-entry power of ZF-equalized white noise frames.
struct ConsistencyResult {
    std::string name;
    double phi_formula = 0.0;
    double phi_empirical = 0.0;
    double rel_err = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool skipped = false;  // singular channel: reported, not failed
    std::string note;
};

ConsistencyResult frame_consistency_check(std::string name,
                                          const std::vector<std::vector<otfs::DDPath>>& antenna_paths,
                                          const otfs::Grid& grid, const Config& cfg,
                                          int noise_draws = 10000, double rel_tol = 0.02);

}  // namespace otfsop::mc
