#pragma once

// Closed-form outage probability: Gaussian approximation of the first hop's
// noise-enhancement statistic, inverse-gamma -> Gamma moment matching for the
// second hop, per-link OP, and the end-to-end combination for DF relaying.

#include "otfsop/errors.hpp"
#include "otfsop/fading.hpp"
#include "otfsop/otfs.hpp"

namespace otfsop::outage {

// Per-link budget; snr_threshold is linear.
struct LinkBudget {
    double tx_power = 1.0;
    double distance = 1.0;
    double pathloss_exp = 2.0;
    double noise_power = 1.0;
    double snr_threshold = 1.0;

    void validate() const;

    // The link is in outage iff phi >= phi_threshold():
    //   Ps / (sigma^2 phi d^alpha) <= gamma_th  <=>  phi >= t.
    double phi_threshold() const;

    // 10 log10(Ps / (sigma^2 d^alpha)): the phi-independent part of the SNR.
    double average_snr_db() const;

    // Set tx_power so average_snr_db() equals the given value.
    void set_average_snr_db(double snr_db);

    friend bool operator==(const LinkBudget&, const LinkBudget&) = default;
};

// Mean and variance of phi_sr under the central-limit approximation.
struct PhiStats {
    double mean = 0.0;
    double variance = 0.0;

    double gaussian_pdf(double x) const;
};

// Gamma(shape alpha_g, rate beta_g) matched to the mean and variance of
// phi_rd, the NM-bin average of i.i.d. inverse-gamma variates.
struct GammaApprox {
    double alpha_g = 0.0;
    double beta_g = 0.0;
    fading::IGParams source_ig;

    double mean() const { return alpha_g / beta_g; }
    double variance() const { return alpha_g / (beta_g * beta_g); }
    double pdf(double x) const;
};

struct OutagePoint {
    double p_link1 = 0.0;
    double p_link2 = 0.0;
    double p_e2e = 0.0;
};

// mean = E[1/rho], variance = (1/NM)(E[1/rho^2] - E[1/rho]^2) with rho the
// K-antenna MRT power sum. Requires K >= 3 so that E[1/rho^2] exists.
PhiStats phi_sr_stats(const fading::SRParams& p, int antennas, const otfs::Grid& grid);

// alpha_g = NM (alpha_ig - 2), beta_g = NM (alpha_ig - 1)(alpha_ig - 2) /
// beta_ig. Requires alpha_ig > 2 (finite variance).
GammaApprox gamma_approx(const fading::IGParams& ig, const otfs::Grid& grid);

// Pr(outage) = Q((t - E[phi]) / sqrt(V[phi])) with t the phi threshold.
double op_link_sr(const PhiStats& stats, const LinkBudget& budget);

// Pr(outage) = Pr(phi_rd >= t) = upper regularized gamma Q(alpha_g, beta_g t).
double op_link_nakagami(const GammaApprox& g, const LinkBudget& budget);

// DF end-to-end outage: p1 + p2 - p1 p2; never below max(p1, p2).
double op_end_to_end(double p1, double p2);

OutagePoint make_outage_point(double p1, double p2);

}  // namespace otfsop::outage
