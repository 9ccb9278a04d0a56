#include "otfsop/outage.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "otfsop/special.hpp"

namespace otfsop::outage {

void LinkBudget::validate() const {
    if (!(tx_power > 0.0) || !(distance > 0.0) || !(pathloss_exp > 0.0) ||
        !(noise_power > 0.0) || !(snr_threshold > 0.0)) {
        throw std::domain_error("LinkBudget: all fields must be strictly positive");
    }
}

double LinkBudget::phi_threshold() const {
    validate();
    return tx_power / (noise_power * std::pow(distance, pathloss_exp) * snr_threshold);
}

double LinkBudget::average_snr_db() const {
    validate();
    return 10.0 * std::log10(tx_power / (noise_power * std::pow(distance, pathloss_exp)));
}

void LinkBudget::set_average_snr_db(double snr_db) {
    tx_power = noise_power * std::pow(distance, pathloss_exp) * std::pow(10.0, snr_db / 10.0);
}

double PhiStats::gaussian_pdf(double x) const {
    const double sd = std::sqrt(variance);
    const double z = (x - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
}

double GammaApprox::pdf(double x) const {
    if (x <= 0.0) return 0.0;
    return std::exp(alpha_g * std::log(beta_g) + (alpha_g - 1.0) * std::log(x) - beta_g * x -
                    special::log_gamma(alpha_g));
}

PhiStats phi_sr_stats(const fading::SRParams& p, int antennas, const otfs::Grid& grid) {
    grid.validate();
    if (antennas <= 2) {
        throw DivergentMomentError(
            "phi_sr_stats: the Gaussian approximation needs E[1/rho^2], which exists only "
            "for K > 2 antennas (got K = " + std::to_string(antennas) + ")");
    }
    const fading::MrtPowerSum sum(p, antennas);
    const double m1 = sum.inverse_moment(1);
    const double m2 = sum.inverse_moment(2);
    PhiStats stats;
    stats.mean = m1;
    stats.variance = (m2 - m1 * m1) / grid.bins();
    return stats;
}

GammaApprox gamma_approx(const fading::IGParams& ig, const otfs::Grid& grid) {
    grid.validate();
    ig.validate();
    if (!ig.has_variance()) {
        throw DivergentMomentError(
            "gamma_approx: moment matching needs a finite variance of 1/|D|^2, which "
            "requires alpha_ig > 2 (got alpha_ig = " + std::to_string(ig.alpha_ig) + ")");
    }
    const double nm = grid.bins();
    GammaApprox g;
    g.alpha_g = nm * (ig.alpha_ig - 2.0);
    g.beta_g = nm * (ig.alpha_ig - 1.0) * (ig.alpha_ig - 2.0) / ig.beta_ig;
    g.source_ig = ig;
    return g;
}

double op_link_sr(const PhiStats& stats, const LinkBudget& budget) {
    if (!(stats.mean > 0.0) || !(stats.variance > 0.0))
        throw std::domain_error("op_link_sr: PhiStats must have positive mean and variance");
    const double t = budget.phi_threshold();
    return special::q_function((t - stats.mean) / std::sqrt(stats.variance));
}

double op_link_nakagami(const GammaApprox& g, const LinkBudget& budget) {
    if (!(g.alpha_g > 0.0) || !(g.beta_g > 0.0))
        throw std::domain_error("op_link_nakagami: GammaApprox must have positive parameters");
    const double t = budget.phi_threshold();
    return special::reg_gamma_upper(g.alpha_g, g.beta_g * t);
}

double op_end_to_end(double p1, double p2) {
    if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0))
        throw std::domain_error("op_end_to_end: probabilities must lie in [0, 1]");
    // p1 + p2 - p1 p2, arranged so the result never rounds below max(p1, p2).
    const double hi = std::max(p1, p2);
    const double lo = std::min(p1, p2);
    return hi + lo * (1.0 - hi);
}

OutagePoint make_outage_point(double p1, double p2) {
    return OutagePoint{p1, p2, op_end_to_end(p1, p2)};
}

}  // namespace otfsop::outage
