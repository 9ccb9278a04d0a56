#include "otfsop/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace otfsop::mc {

namespace {

constexpr std::uint64_t kTagPhiSr = 0x7068695f7372ull;      // "phi_sr"
constexpr std::uint64_t kTagPhiRd = 0x7068695f7264ull;      // "phi_rd"
constexpr std::uint64_t kTagFrameCheck = 0x6672616d65ull;   // "frame"

// Runs one double-valued statistic per trial. Each trial owns substream
// (key, trial index) and writes into its own slot, so the result is invariant
// to worker count and scheduling.
std::vector<double> run_trials(std::uint64_t key, const Config& cfg,
                               const std::function<double(RandomStream&)>& per_trial) {
    cfg.validate();
    std::vector<double> out(cfg.trials);
    const auto run_range = [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t t = lo; t < hi; ++t) {
            RandomStream rng(key, t);
            out[t] = per_trial(rng);
        }
    };
    const int workers = std::min<std::uint64_t>(cfg.workers, cfg.trials);
    if (workers <= 1) {
        run_range(0, cfg.trials);
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const std::uint64_t chunk = (cfg.trials + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::uint64_t lo = static_cast<std::uint64_t>(w) * chunk;
        const std::uint64_t hi = std::min(cfg.trials, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(run_range, lo, hi);
    }
    for (std::thread& th : pool) th.join();
    return out;
}

OPEstimate estimate_from_counts(std::uint64_t successes, std::uint64_t n) {
    OPEstimate e;
    e.trials = n;
    e.p_hat = static_cast<double>(successes) / static_cast<double>(n);
    const auto [lo, hi] = wilson_interval(successes, n, 1.959963984540054);
    e.ci_low = lo;
    e.ci_high = hi;
    return e;
}

double sample_quantile(const std::vector<double>& sorted, double q) {
    const double h = q * (static_cast<double>(sorted.size()) - 1.0);
    const std::size_t i = static_cast<std::size_t>(h);
    if (i + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(i);
    return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
}

}  // namespace

void Config::validate() const {
    if (trials < 1) throw std::domain_error("mc::Config: trials must be >= 1");
    if (workers < 1) throw std::domain_error("mc::Config: workers must be >= 1");
    if (histogram_bins < 10) throw std::domain_error("mc::Config: histogram_bins must be >= 10");
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t n, double z) {
    if (n == 0) throw std::domain_error("wilson_interval: n must be >= 1");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    // The interval always contains the point estimate; keep that true under
    // rounding at the endpoints.
    const double lo = std::max(0.0, std::min(center - half, p));
    const double hi = std::min(1.0, std::max(center + half, p));
    return {lo, hi};
}

std::vector<double> sim_phi_sr(const fading::SRParams& p, int antennas, const otfs::Grid& grid,
                               const Config& cfg) {
    p.validate();
    grid.validate();
    if (antennas < 1) throw std::domain_error("sim_phi_sr: antennas must be >= 1");
    const int bins = grid.bins();
    const std::uint64_t key = derive_key(cfg.master_seed, kTagPhiSr);
    return run_trials(key, cfg, [&p, antennas, bins](RandomStream& rng) {
        double phi = 0.0;
        for (int b = 0; b < bins; ++b) {
            double rho = 0.0;
            for (int i = 0; i < antennas; ++i) {
                rho += std::norm(fading::sample_sr_gain(p, rng));
            }
            phi += 1.0 / rho;
        }
        return phi / bins;
    });
}

PhiRdSamples sim_phi_rd(const fading::NakagamiParams& p, const otfs::Grid& grid,
                        const Config& cfg) {
    p.validate();
    grid.validate();
    const int bins = grid.bins();
    const std::uint64_t key = derive_key(cfg.master_seed, kTagPhiRd);
    PhiRdSamples out;
    out.mean_undefined = (p.m <= 1.0);
    out.samples = run_trials(key, cfg, [&p, bins](RandomStream& rng) {
        double phi = 0.0;
        for (int b = 0; b < bins; ++b) {
            phi += 1.0 / fading::sample_nakagami_power(p, rng);
        }
        return phi / bins;
    });
    return out;
}

OPEstimate mc_outage(std::span<const double> phi_samples, const outage::LinkBudget& budget) {
    if (phi_samples.empty()) throw std::domain_error("mc_outage: sample sequence is empty");
    const double t = budget.phi_threshold();
    std::uint64_t successes = 0;
    for (const double phi : phi_samples) {
        if (phi >= t) ++successes;
    }
    return estimate_from_counts(successes, phi_samples.size());
}

OPEstimate mc_outage_e2e(std::span<const double> phi1, std::span<const double> phi2,
                         const outage::LinkBudget& budget1, const outage::LinkBudget& budget2) {
    if (phi1.empty()) throw std::domain_error("mc_outage_e2e: sample sequences are empty");
    if (phi1.size() != phi2.size())
        throw std::domain_error("mc_outage_e2e: sample sequences must have equal length");
    const double t1 = budget1.phi_threshold();
    const double t2 = budget2.phi_threshold();
    std::uint64_t successes = 0;
    for (std::size_t i = 0; i < phi1.size(); ++i) {
        if (phi1[i] >= t1 || phi2[i] >= t2) ++successes;
    }
    return estimate_from_counts(successes, phi1.size());
}

HistogramFit histogram_fit(std::span<const double> samples,
                           const std::function<double(double)>& model_pdf, const Config& cfg) {
    cfg.validate();
    const int bins = cfg.histogram_bins;
    if (samples.size() < static_cast<std::size_t>(10) * bins) {
        throw std::domain_error("fit_metrics: need at least 10 samples per histogram bin");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double lo = sample_quantile(sorted, 0.001);
    const double hi = sample_quantile(sorted, 0.999);
    if (!(hi > lo)) {
        throw std::domain_error("fit_metrics: degenerate sample support (all values equal)");
    }
    const double width = (hi - lo) / bins;

    std::vector<std::uint64_t> counts(static_cast<std::size_t>(bins), 0);
    std::uint64_t in_support = 0;
    for (const double x : sorted) {
        if (x < lo || x > hi) continue;
        int b = static_cast<int>((x - lo) / width);
        if (b >= bins) b = bins - 1;
        ++counts[static_cast<std::size_t>(b)];
        ++in_support;
    }

    HistogramFit fit;
    fit.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b) fit.edges[static_cast<std::size_t>(b)] = lo + b * width;
    fit.empirical_density.resize(static_cast<std::size_t>(bins));
    fit.model_density.resize(static_cast<std::size_t>(bins));

    std::vector<double> model_mass(static_cast<std::size_t>(bins));
    double model_total = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double a = fit.edges[static_cast<std::size_t>(b)];
        const double c = fit.edges[static_cast<std::size_t>(b) + 1];
        // Simpson bin average of the model pdf.
        const double avg = (model_pdf(a) + 4.0 * model_pdf(0.5 * (a + c)) + model_pdf(c)) / 6.0;
        fit.model_density[static_cast<std::size_t>(b)] = avg;
        model_mass[static_cast<std::size_t>(b)] = avg * width;
        model_total += model_mass[static_cast<std::size_t>(b)];
    }

    double nmse_num = 0.0;
    double nmse_den = 0.0;
    double kl = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double emp_mass =
            static_cast<double>(counts[static_cast<std::size_t>(b)]) / static_cast<double>(in_support);
        const double emp_density = emp_mass / width;
        fit.empirical_density[static_cast<std::size_t>(b)] = emp_density;
        const double diff = emp_density - fit.model_density[static_cast<std::size_t>(b)];
        nmse_num += diff * diff;
        nmse_den += emp_density * emp_density;
        if (emp_mass > 0.0) {
            const double m =
                std::max(model_total > 0.0 ? model_mass[static_cast<std::size_t>(b)] / model_total
                                           : 0.0,
                         1e-12);
            kl += emp_mass * std::log(emp_mass / m);
        }
    }

    fit.metrics.nmse = nmse_num / nmse_den;
    fit.metrics.kl = std::max(kl, 0.0);
    fit.metrics.bins = bins;
    fit.metrics.support_lo = lo;
    fit.metrics.support_hi = hi;
    return fit;
}

FitMetrics fit_metrics(std::span<const double> samples,
                       const std::function<double(double)>& model_pdf, const Config& cfg) {
    return histogram_fit(samples, model_pdf, cfg).metrics;
}

ConsistencyResult frame_consistency_check(std::string name,
                                          const std::vector<std::vector<otfs::DDPath>>& antenna_paths,
                                          const otfs::Grid& grid, const Config& cfg,
                                          int noise_draws, double rel_tol) {
    grid.validate();
    cfg.validate();
    if (antenna_paths.empty())
        throw std::domain_error("frame_consistency_check: need at least one antenna");
    if (noise_draws < 1)
        throw std::domain_error("frame_consistency_check: noise_draws must be >= 1");

    ConsistencyResult res;
    res.name = std::move(name);
    res.tolerance = rel_tol;

    otfs::BinGainGrid effective;
    try {
        std::vector<otfs::BinGainGrid> grids;
        grids.reserve(antenna_paths.size());
        for (const auto& paths : antenna_paths) {
            grids.push_back(otfs::bin_gains_from_paths(paths, grid));
        }
        if (grids.size() == 1) {
            res.phi_formula = otfs::phi_zf(grids.front());
            effective = grids.front();
        } else {
            res.phi_formula = otfs::phi_mrt(grids);
            effective = otfs::mrt_combined_gains(grids);
        }

        const std::uint64_t key = derive_key(cfg.master_seed, kTagFrameCheck);
        RandomStream rng(key, 0);
        const int bins = grid.bins();
        double power_sum = 0.0;
        otfs::DDFrame noise = otfs::DDFrame::zeros(grid);
        for (int d = 0; d < noise_draws; ++d) {
            for (auto& z : noise.values) z = rng.circular_normal(1.0);
            const otfs::DDFrame eq = otfs::zf_equalize(noise, effective);
            for (const auto& z : eq.values) power_sum += std::norm(z);
        }
        res.phi_empirical = power_sum / (static_cast<double>(noise_draws) * bins);
        res.rel_err = std::fabs(res.phi_empirical - res.phi_formula) / res.phi_formula;
        res.pass = res.rel_err <= rel_tol;
    } catch (const SingularChannelError& e) {
        res.skipped = true;
        res.pass = false;
        res.note = e.what();
    }
    return res;
}

}  // namespace otfsop::mc
