#include "cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "cli/scenario.hpp"
#include "cli/validation.hpp"
#include "otfsop/montecarlo.hpp"

namespace otfsop::cli {

namespace {

constexpr char kCurveHeader[] =
    "snr_db,op_an_1,op_mc_1,ci1_lo,ci1_hi,op_an_2,op_mc_2,ci2_lo,ci2_hi,"
    "op_an_e2e,op_mc_e2e,cie_lo,cie_hi";

struct CurveRow {
    double snr_db;
    double op_an_1, op_mc_1, ci1_lo, ci1_hi;
    double op_an_2, op_mc_2, ci2_lo, ci2_hi;
    double op_an_e2e, op_mc_e2e, cie_lo, cie_hi;
};

ScenarioConfig load_with_overrides(const std::string& config_path, const RunOverrides& ov) {
    ScenarioConfig cfg = load_scenario(config_path);
    if (ov.trials) cfg.mc.trials = *ov.trials;
    if (ov.seed) cfg.mc.master_seed = *ov.seed;
    if (ov.workers) cfg.mc.workers = *ov.workers;
    cfg.mc.validate();
    return cfg;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << contents;
    if (!out) throw std::runtime_error("failed writing output file " + path);
}

int precondition_exit(const DivergentMomentError& e) {
    std::cerr << "precondition violation: " << e.what() << "\n";
    return kExitPrecondition;
}

int config_exit(const ConfigError& e) {
    std::cerr << "config error at " << e.what() << "\n";
    return kExitConfigError;
}

}  // namespace

int cmd_op_curve(const std::string& config_path, const std::string& out_path,
                 const RunOverrides& overrides) {
    try {
        const ScenarioConfig cfg = load_with_overrides(config_path, overrides);

        // Analytical approximations are sweep-independent.
        const outage::PhiStats stats =
            outage::phi_sr_stats(cfg.link1.sr, cfg.link1.antennas, cfg.grid);
        const outage::GammaApprox gamma =
            outage::gamma_approx(fading::ig_from_nakagami(cfg.link2.nakagami), cfg.grid);

        // So are the phi samples: the budget only moves the threshold.
        const std::vector<double> phi1 =
            mc::sim_phi_sr(cfg.link1.sr, cfg.link1.antennas, cfg.grid, cfg.mc);
        const mc::PhiRdSamples phi2 = mc::sim_phi_rd(cfg.link2.nakagami, cfg.grid, cfg.mc);

        std::vector<CurveRow> rows;
        double worst1 = 0.0, worst2 = 0.0, worst_e2e = 0.0;
        for (int i = 0; i < cfg.sweep.points(); ++i) {
            const double snr_db = cfg.sweep.snr_db(i);
            outage::LinkBudget b1 = cfg.link1.budget;
            b1.set_average_snr_db(snr_db);
            outage::LinkBudget b2 = cfg.link2.budget;
            if (!cfg.link2.fixed_tx_power) b2.set_average_snr_db(snr_db);

            CurveRow row{};
            row.snr_db = snr_db;
            row.op_an_1 = outage::op_link_sr(stats, b1);
            row.op_an_2 = outage::op_link_nakagami(gamma, b2);
            row.op_an_e2e = outage::op_end_to_end(row.op_an_1, row.op_an_2);

            const mc::OPEstimate e1 = mc::mc_outage(phi1, b1);
            const mc::OPEstimate e2 = mc::mc_outage(phi2.samples, b2);
            const mc::OPEstimate ee = mc::mc_outage_e2e(phi1, phi2.samples, b1, b2);
            row.op_mc_1 = e1.p_hat;
            row.ci1_lo = e1.ci_low;
            row.ci1_hi = e1.ci_high;
            row.op_mc_2 = e2.p_hat;
            row.ci2_lo = e2.ci_low;
            row.ci2_hi = e2.ci_high;
            row.op_mc_e2e = ee.p_hat;
            row.cie_lo = ee.ci_low;
            row.cie_hi = ee.ci_high;

            worst1 = std::max(worst1, std::fabs(row.op_an_1 - row.op_mc_1));
            worst2 = std::max(worst2, std::fabs(row.op_an_2 - row.op_mc_2));
            worst_e2e = std::max(worst_e2e, std::fabs(row.op_an_e2e - row.op_mc_e2e));
            rows.push_back(row);
        }

        std::ostringstream csv;
        csv << kCurveHeader << "\n";
        for (const CurveRow& r : rows) {
            csv << format_double(r.snr_db) << ',' << format_double(r.op_an_1) << ','
                << format_double(r.op_mc_1) << ',' << format_double(r.ci1_lo) << ','
                << format_double(r.ci1_hi) << ',' << format_double(r.op_an_2) << ','
                << format_double(r.op_mc_2) << ',' << format_double(r.ci2_lo) << ','
                << format_double(r.ci2_hi) << ',' << format_double(r.op_an_e2e) << ','
                << format_double(r.op_mc_e2e) << ',' << format_double(r.cie_lo) << ','
                << format_double(r.cie_hi) << "\n";
        }
        csv << "# max_abs_diff_an_vs_mc: link1=" << format_double(worst1)
            << " link2=" << format_double(worst2) << " e2e=" << format_double(worst_e2e)
            << "\n";
        write_file(out_path, csv.str());

        std::cout << "op-curve: " << rows.size() << " rows -> " << out_path
                  << " (max |analytic - mc|: link1 " << format_double(worst1) << ", link2 "
                  << format_double(worst2) << ", e2e " << format_double(worst_e2e) << ")\n";
        return kExitOk;
    } catch (const ConfigError& e) {
        return config_exit(e);
    } catch (const DivergentMomentError& e) {
        return precondition_exit(e);
    } catch (const std::exception& e) {
        std::cerr << "op-curve failed: " << e.what() << "\n";
        return kExitValidationFailure;
    }
}

int cmd_pdf_fit(const std::string& config_path, const std::string& out_path,
                const std::string& link_sel, const RunOverrides& overrides) {
    try {
        if (link_sel != "1" && link_sel != "2" && link_sel != "both") {
            throw ConfigError("--link", "must be one of 1, 2, both");
        }
        const ScenarioConfig cfg = load_with_overrides(config_path, overrides);

        std::ostringstream csv;
        csv << "link,bin_low,bin_high,empirical_density,model_density\n";
        std::ostringstream footer;

        const auto emit = [&](int link, const mc::HistogramFit& fit) {
            for (int b = 0; b < fit.metrics.bins; ++b) {
                csv << link << ',' << format_double(fit.edges[static_cast<std::size_t>(b)]) << ','
                    << format_double(fit.edges[static_cast<std::size_t>(b) + 1]) << ','
                    << format_double(fit.empirical_density[static_cast<std::size_t>(b)]) << ','
                    << format_double(fit.model_density[static_cast<std::size_t>(b)]) << "\n";
            }
            footer << "# link" << link << ": nmse=" << format_double(fit.metrics.nmse)
                   << " kl=" << format_double(fit.metrics.kl) << " bins=" << fit.metrics.bins
                   << " support_lo=" << format_double(fit.metrics.support_lo)
                   << " support_hi=" << format_double(fit.metrics.support_hi) << "\n";
            std::cout << "pdf-fit link" << link << ": nmse=" << format_double(fit.metrics.nmse)
                      << " kl=" << format_double(fit.metrics.kl) << " (bins=" << fit.metrics.bins
                      << ", support=[" << format_double(fit.metrics.support_lo) << ", "
                      << format_double(fit.metrics.support_hi) << "])\n";
        };

        if (link_sel == "1" || link_sel == "both") {
            const outage::PhiStats stats =
                outage::phi_sr_stats(cfg.link1.sr, cfg.link1.antennas, cfg.grid);
            const std::vector<double> phi =
                mc::sim_phi_sr(cfg.link1.sr, cfg.link1.antennas, cfg.grid, cfg.mc);
            emit(1, mc::histogram_fit(
                        phi, [&stats](double x) { return stats.gaussian_pdf(x); }, cfg.mc));
        }
        if (link_sel == "2" || link_sel == "both") {
            const outage::GammaApprox gamma =
                outage::gamma_approx(fading::ig_from_nakagami(cfg.link2.nakagami), cfg.grid);
            const mc::PhiRdSamples phi = mc::sim_phi_rd(cfg.link2.nakagami, cfg.grid, cfg.mc);
            emit(2, mc::histogram_fit(
                        phi.samples, [&gamma](double x) { return gamma.pdf(x); }, cfg.mc));
        }

        csv << footer.str();
        write_file(out_path, csv.str());
        return kExitOk;
    } catch (const ConfigError& e) {
        return config_exit(e);
    } catch (const DivergentMomentError& e) {
        return precondition_exit(e);
    } catch (const std::exception& e) {
        std::cerr << "pdf-fit failed: " << e.what() << "\n";
        return kExitValidationFailure;
    }
}

int cmd_validate(std::optional<std::uint64_t> seed, bool inject_failure) {
    try {
        const std::vector<CheckResult> results =
            run_validation(seed.value_or(20250801), inject_failure);
        std::cout << "check,tolerance,observed,status\n";
        int failed = 0;
        std::string first_failure;
        for (const CheckResult& r : results) {
            std::cout << r.name << ',' << format_double(r.tolerance) << ','
                      << format_double(r.observed) << ',' << (r.pass ? "PASS" : "FAIL") << "\n";
            if (!r.pass) {
                ++failed;
                if (first_failure.empty()) first_failure = r.name;
            }
        }
        std::cout << "validate: " << (results.size() - static_cast<std::size_t>(failed)) << "/"
                  << results.size() << " checks passed\n";
        if (failed > 0) {
            std::cerr << "validation failure: " << first_failure << " (and "
                      << (failed - 1) << " more)\n";
            return kExitValidationFailure;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "validate failed to run: " << e.what() << "\n";
        return kExitValidationFailure;
    }
}

}  // namespace otfsop::cli
