#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "cli/oracles.hpp"
#include "otfsop/otfs.hpp"
#include "otfsop/random.hpp"
#include "support.hpp"

using namespace otfsop;
using otfs::Complex;
using testsupport::rel_err;

namespace {

otfs::DDFrame random_frame(const otfs::Grid& g, RandomStream& rng) {
    otfs::DDFrame f = otfs::DDFrame::zeros(g);
    for (auto& z : f.values) z = rng.circular_normal(1.0);
    return f;
}

otfs::DDFrame random_qpsk_frame(const otfs::Grid& g, RandomStream& rng) {
    otfs::DDFrame f = otfs::DDFrame::zeros(g);
    const double a = 1.0 / std::sqrt(2.0);
    for (auto& z : f.values) {
        z = {rng.next_u32() & 1u ? a : -a, rng.next_u32() & 1u ? a : -a};
    }
    return f;
}

std::vector<otfs::DDPath> random_paths(const otfs::Grid& g, int count, RandomStream& rng) {
    std::vector<otfs::DDPath> paths(static_cast<std::size_t>(count));
    for (auto& p : paths) {
        p.delay_tap = static_cast<int>(rng.next_u32() % static_cast<std::uint32_t>(g.m_delay));
        p.doppler_tap = static_cast<int>(rng.next_u32() % static_cast<std::uint32_t>(g.n_doppler));
        p.gain = rng.circular_normal(1.0);
    }
    return paths;
}

bool grid_nonsingular(const otfs::BinGainGrid& g) {
    double peak = 0.0;
    double low = 1e300;
    for (const auto& z : g.gains) {
        peak = std::max(peak, std::abs(z));
        low = std::min(low, std::abs(z));
    }
    return low > 1e-6 * peak;
}

// Brute-force evaluation of the defining double sum over the sparse first
// column of the delay-Doppler channel matrix.
otfs::BinGainGrid bin_gains_double_sum(const std::vector<otfs::DDPath>& paths,
                                       const otfs::Grid& g) {
    std::vector<Complex> col(static_cast<std::size_t>(g.bins()), Complex{0.0, 0.0});
    for (const auto& p : paths)
        col[static_cast<std::size_t>(p.doppler_tap) * g.m_delay + p.delay_tap] += p.gain;
    otfs::BinGainGrid out;
    out.n_doppler = g.n_doppler;
    out.m_delay = g.m_delay;
    out.gains.assign(static_cast<std::size_t>(g.bins()), Complex{0.0, 0.0});
    for (int k = 0; k < g.n_doppler; ++k) {
        for (int l = 0; l < g.m_delay; ++l) {
            Complex acc{0.0, 0.0};
            for (int n = 0; n < g.n_doppler; ++n) {
                for (int m = 0; m < g.m_delay; ++m) {
                    const double ang = 2.0 * M_PI *
                                       (static_cast<double>(l) * m / g.m_delay -
                                        static_cast<double>(k) * n / g.n_doppler);
                    acc += col[static_cast<std::size_t>(n) * g.m_delay + m] *
                           Complex{std::cos(ang), std::sin(ang)};
                }
            }
            out.at(k, l) = acc;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS((otfs::Grid{0, 4, {}, {}}).validate(), std::domain_error);
    CHECK_THROWS_AS((otfs::Grid{4, 0, {}, {}}).validate(), std::domain_error);
    otfs::Grid phys{4, 4, 1.0 / 15000.0, 15000.0};
    phys.validate();  // T * delta_f == 1
    phys.subcarrier_spacing = 14000.0;
    CHECK_THROWS_AS(phys.validate(), std::domain_error);
}

TEST_CASE("isfft examples") {
    const otfs::Grid g{4, 8, {}, {}};
    SUBCASE("all-zero frame maps to all zeros") {
        const auto tf = otfs::isfft(otfs::DDFrame::zeros(g), 3.0);
        for (const auto& z : tf.values) CHECK(std::abs(z) == 0.0);
    }
    SUBCASE("unit impulse at the origin spreads flat") {
        otfs::DDFrame x = otfs::DDFrame::zeros(g);
        x.at(0, 0) = {1.0, 0.0};
        const auto tf = otfs::isfft(x, 1.0);
        const double want = 1.0 / std::sqrt(static_cast<double>(g.bins()));
        for (const auto& z : tf.values) {
            CHECK(z.real() == doctest::Approx(want).epsilon(1e-12));
            CHECK(std::fabs(z.imag()) < 1e-12);
        }
    }
    SUBCASE("energy scales by the transmit power") {
        RandomStream rng(11, 0);
        const auto x = random_frame(g, rng);
        const double ps = 2.7;
        const auto tf = otfs::isfft(x, ps);
        double ex = 0.0;
        double etf = 0.0;
        for (const auto& z : x.values) ex += std::norm(z);
        for (const auto& z : tf.values) etf += std::norm(z);
        CHECK(etf == doctest::Approx(ps * ex).epsilon(1e-12));
    }
}

TEST_CASE("sfft inverts isfft") {
    RandomStream rng(12, 0);
    for (int n : {2, 4, 8, 16}) {
        for (int m : {2, 4, 8, 16}) {
            const otfs::Grid g{n, m, {}, {}};
            const auto x = random_frame(g, rng);
            const double ps = 1.9;
            const auto back = otfs::sfft(otfs::isfft(x, ps));
            double worst = 0.0;
            for (int i = 0; i < x.size(); ++i) {
                worst = std::max(worst, std::abs(back.values[static_cast<std::size_t>(i)] -
                                                 std::sqrt(ps) * x.values[static_cast<std::size_t>(i)]));
            }
            CHECK(worst < 1e-10);
        }
    }
    SUBCASE("constant TF grid collapses to the origin impulse") {
        const otfs::Grid g{4, 4, {}, {}};
        otfs::TFFrame tf;
        tf.n_doppler = 4;
        tf.m_delay = 4;
        tf.values.assign(16, Complex{0.25, 0.0});  // 1/sqrt(NM)
        const auto x = otfs::sfft(tf);
        CHECK(x.at(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
        for (int n = 0; n < 4; ++n)
            for (int m = 0; m < 4; ++m)
                if (n || m) CHECK(std::abs(x.at(n, m)) < 1e-12);
    }
}

TEST_CASE("bin_gains_from_paths") {
    const otfs::Grid g{4, 4, {}, {}};
    SUBCASE("single origin path gives a flat response") {
        const std::vector<otfs::DDPath> paths{{0, 0, {0.3, -0.4}}};
        const auto d = otfs::bin_gains_from_paths(paths, g);
        for (const auto& z : d.gains) {
            CHECK(z.real() == doctest::Approx(0.3).epsilon(1e-14));
            CHECK(z.imag() == doctest::Approx(-0.4).epsilon(1e-14));
        }
    }
    SUBCASE("single shifted path is a pure phase ramp") {
        const std::vector<otfs::DDPath> paths{{2, 3, {0.6, 0.8}}};
        const auto d = otfs::bin_gains_from_paths(paths, g);
        for (const auto& z : d.gains) CHECK(std::abs(z) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("matches the brute-force double sum") {
        RandomStream rng(13, 0);
        for (int trial = 0; trial < 20; ++trial) {
            const auto paths = random_paths(g, 2, rng);
            const auto fast = otfs::bin_gains_from_paths(paths, g);
            const auto slow = bin_gains_double_sum(paths, g);
            for (int i = 0; i < g.bins(); ++i) {
                CHECK(std::abs(fast.gains[static_cast<std::size_t>(i)] -
                               slow.gains[static_cast<std::size_t>(i)]) < 1e-12);
            }
        }
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(otfs::bin_gains_from_paths({}, g), std::domain_error);
        const std::vector<otfs::DDPath> bad{{4, 0, {1.0, 0.0}}};
        CHECK_THROWS_AS(otfs::bin_gains_from_paths(bad, g), std::domain_error);
    }
}

TEST_CASE("apply_dd_channel") {
    RandomStream rng(14, 0);
    SUBCASE("identity path with no noise scales the frame") {
        const otfs::Grid g{8, 4, {}, {}};
        const auto x = random_frame(g, rng);
        const std::vector<otfs::DDPath> paths{{0, 0, {1.0, 0.0}}};
        const otfs::LinkGain link{3.0, 2.0, 4.5};
        const auto y = otfs::apply_dd_channel(x, paths, link, 0.0, rng);
        const double amp = link.amplitude();
        for (int i = 0; i < x.size(); ++i) {
            CHECK(std::abs(y.values[static_cast<std::size_t>(i)] -
                           amp * x.values[static_cast<std::size_t>(i)]) < 1e-12);
        }
    }
    SUBCASE("equals the explicit block-circulant matrix on small grids") {
        for (const auto& [n, m] : {std::pair{4, 4}, std::pair{2, 3}, std::pair{3, 5}}) {
            const otfs::Grid g{n, m, {}, {}};
            for (int trial = 0; trial < 10; ++trial) {
                const auto paths = random_paths(g, 2, rng);
                const auto x = random_frame(g, rng);
                const otfs::LinkGain link{1.0, 2.0, 1.0};
                const auto y = otfs::apply_dd_channel(x, paths, link, 0.0, rng);
                const auto h = cli::block_circulant_from_paths(paths, n, m);
                const auto y_mat = cli::matvec(h, x.values);
                for (int i = 0; i < x.size(); ++i) {
                    CHECK(std::abs(y.values[static_cast<std::size_t>(i)] -
                                   y_mat[static_cast<std::size_t>(i)]) < 1e-10);
                }
            }
        }
    }
    SUBCASE("noise has the configured per-entry power") {
        const otfs::Grid g{8, 8, {}, {}};
        const auto x = otfs::DDFrame::zeros(g);
        const std::vector<otfs::DDPath> paths{{0, 0, {1.0, 0.0}}};
        const otfs::LinkGain link{1.0, 2.0, 1.0};
        const double sigma2 = 0.8;
        double power = 0.0;
        int entries = 0;
        while (entries < 100000) {
            const auto y = otfs::apply_dd_channel(x, paths, link, sigma2, rng);
            for (const auto& z : y.values) power += std::norm(z);
            entries += y.size();
        }
        CHECK(power / entries == doctest::Approx(sigma2).epsilon(0.02));
    }
}

TEST_CASE("zf_equalize") {
    RandomStream rng(15, 0);
    SUBCASE("flat unit channel is the identity") {
        const otfs::Grid g{4, 4, {}, {}};
        const auto y = random_frame(g, rng);
        otfs::BinGainGrid flat;
        flat.n_doppler = 4;
        flat.m_delay = 4;
        flat.gains.assign(16, Complex{1.0, 0.0});
        const auto out = otfs::zf_equalize(y, flat);
        for (int i = 0; i < y.size(); ++i) {
            CHECK(std::abs(out.values[static_cast<std::size_t>(i)] -
                           y.values[static_cast<std::size_t>(i)]) < 1e-12);
        }
    }
    SUBCASE("noiseless recovery of a QPSK frame") {
        const otfs::Grid g{8, 8, {}, {}};
        int done = 0;
        while (done < 100) {
            const auto paths = random_paths(g, 2, rng);
            const auto d = otfs::bin_gains_from_paths(paths, g);
            if (!grid_nonsingular(d)) continue;
            ++done;
            const auto x = random_qpsk_frame(g, rng);
            const otfs::LinkGain link{2.0, 2.0, 1.3};
            const auto y = otfs::apply_dd_channel(x, paths, link, 0.0, rng);
            const auto rec = otfs::zf_equalize(y, d);
            const double amp = link.amplitude();
            double num = 0.0;
            double den = 0.0;
            for (int i = 0; i < x.size(); ++i) {
                num += std::norm(rec.values[static_cast<std::size_t>(i)] -
                                 amp * x.values[static_cast<std::size_t>(i)]);
                den += std::norm(amp * x.values[static_cast<std::size_t>(i)]);
            }
            CHECK(std::sqrt(num / den) < 1e-8);
        }
    }
    SUBCASE("zero bin raises a singular-channel error naming the bin") {
        const otfs::Grid g{4, 4, {}, {}};
        otfs::BinGainGrid d;
        d.n_doppler = 4;
        d.m_delay = 4;
        d.gains.assign(16, Complex{1.0, 0.0});
        d.at(2, 3) = {0.0, 0.0};
        const auto y = random_frame(g, rng);
        try {
            otfs::zf_equalize(y, d);
            FAIL("expected SingularChannelError");
        } catch (const SingularChannelError& e) {
            CHECK(e.doppler_bin() == 2);
            CHECK(e.delay_bin() == 3);
        }
        CHECK_THROWS_AS(otfs::phi_zf(d), SingularChannelError);
    }
}

TEST_CASE("phi_zf") {
    SUBCASE("unit-magnitude grid gives one") {
        otfs::BinGainGrid d;
        d.n_doppler = 2;
        d.m_delay = 4;
        d.gains.assign(8, Complex{0.0, 1.0});
        CHECK(otfs::phi_zf(d) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("two bins with magnitudes 1 and 2") {
        otfs::BinGainGrid d;
        d.n_doppler = 1;
        d.m_delay = 2;
        d.gains = {Complex{1.0, 0.0}, Complex{0.0, 2.0}};
        CHECK(otfs::phi_zf(d) == doctest::Approx(0.625).epsilon(1e-14));
    }
    SUBCASE("equals the explicit covariance-trace oracle") {
        RandomStream rng(16, 0);
        const otfs::Grid g{4, 4, {}, {}};
        for (int trial = 0; trial < 10; ++trial) {
            otfs::BinGainGrid d;
            while (true) {
                const auto paths = random_paths(g, 3, rng);
                d = otfs::bin_gains_from_paths(paths, g);
                if (grid_nonsingular(d)) break;
            }
            CHECK(rel_err(otfs::phi_zf(d), cli::phi_trace_oracle(d)) < 1e-10);
        }
    }
}

TEST_CASE("mrt weighting") {
    RandomStream rng(17, 0);
    const otfs::Grid g{4, 4, {}, {}};
    const auto make_grids = [&](int k) {
        std::vector<otfs::BinGainGrid> grids;
        while (static_cast<int>(grids.size()) < k) {
            const auto paths = random_paths(g, 3, rng);
            auto d = otfs::bin_gains_from_paths(paths, g);
            if (grid_nonsingular(d)) grids.push_back(std::move(d));
        }
        return grids;
    };

    SUBCASE("K = 1 weights have unit magnitude") {
        const auto grids = make_grids(1);
        const auto w = otfs::mrt_weights(grids);
        for (int b = 0; b < g.bins(); ++b) {
            CHECK(std::abs(w[0][static_cast<std::size_t>(b)]) == doctest::Approx(1.0).epsilon(1e-12));
        }
        CHECK(otfs::phi_mrt(grids) == doctest::Approx(otfs::phi_zf(grids[0])).epsilon(1e-14));
    }
    SUBCASE("per-bin weight vectors are unit norm; combining is coherent") {
        const auto grids = make_grids(3);
        const auto w = otfs::mrt_weights(grids);
        const auto combined = otfs::mrt_combined_gains(grids);
        for (int b = 0; b < g.bins(); ++b) {
            double norm2 = 0.0;
            Complex eff{0.0, 0.0};
            for (std::size_t i = 0; i < grids.size(); ++i) {
                norm2 += std::norm(w[i][static_cast<std::size_t>(b)]);
                eff += grids[i].gains[static_cast<std::size_t>(b)] * w[i][static_cast<std::size_t>(b)];
            }
            CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(std::fabs(eff.imag()) < 1e-12);
            CHECK(eff.real() ==
                  doctest::Approx(combined.gains[static_cast<std::size_t>(b)].real()).epsilon(1e-12));
        }
    }
    SUBCASE("3-4-5 combining on a single bin") {
        otfs::BinGainGrid d1;
        d1.n_doppler = 1;
        d1.m_delay = 1;
        d1.gains = {Complex{0.0, 3.0}};
        otfs::BinGainGrid d2 = d1;
        d2.gains = {Complex{4.0, 0.0}};
        const std::vector<otfs::BinGainGrid> grids{d1, d2};
        const auto combined = otfs::mrt_combined_gains(grids);
        CHECK(combined.gains[0].real() == doctest::Approx(5.0).epsilon(1e-14));
        CHECK(otfs::phi_mrt(grids) == doctest::Approx(1.0 / 25.0).epsilon(1e-14));
    }
    SUBCASE("all unit-magnitude antennas give 1/K") {
        for (int k : {1, 2, 4, 8}) {
            std::vector<otfs::BinGainGrid> grids;
            for (int i = 0; i < k; ++i) {
                otfs::BinGainGrid d;
                d.n_doppler = 2;
                d.m_delay = 2;
                d.gains.assign(4, Complex{std::cos(0.3 * i), std::sin(0.3 * i)});
                grids.push_back(std::move(d));
            }
            CHECK(otfs::phi_mrt(grids) == doctest::Approx(1.0 / k).epsilon(1e-14));
        }
    }
    SUBCASE("phi_mrt equals phi_zf of the combined grid") {
        const auto grids = make_grids(4);
        CHECK(rel_err(otfs::phi_mrt(grids), otfs::phi_zf(otfs::mrt_combined_gains(grids))) <
              1e-10);
    }
    SUBCASE("all-zero bin across antennas is singular") {
        otfs::BinGainGrid d1;
        d1.n_doppler = 1;
        d1.m_delay = 2;
        d1.gains = {Complex{1.0, 0.0}, Complex{0.0, 0.0}};
        const std::vector<otfs::BinGainGrid> grids{d1, d1};
        CHECK_THROWS_AS(otfs::mrt_weights(grids), SingularChannelError);
        CHECK_THROWS_AS(otfs::phi_mrt(grids), SingularChannelError);
    }
}

TEST_CASE("snr_from_phi") {
    CHECK(otfs::snr_from_phi(1.0, {1.0, 2.0, 1.0}, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    const double g1 = otfs::snr_from_phi(0.5, {1.0, 2.0, 1.0}, 1.0);
    const double g2 = otfs::snr_from_phi(1.0, {1.0, 2.0, 1.0}, 1.0);
    CHECK(g1 == doctest::Approx(2.0 * g2).epsilon(1e-14));
    CHECK(otfs::snr_from_phi(0.5, {2.0, 2.0, 2.0}, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(otfs::snr_from_phi(0.0, {1.0, 2.0, 1.0}, 1.0), std::domain_error);
}

TEST_CASE("equalized white noise carries phi_zf per entry") {
    RandomStream rng(18, 0);
    const otfs::Grid g{4, 4, {}, {}};
    otfs::BinGainGrid d;
    while (true) {
        const auto paths = random_paths(g, 3, rng);
        d = otfs::bin_gains_from_paths(paths, g);
        if (grid_nonsingular(d)) break;
    }
    const double phi = otfs::phi_zf(d);
    const int draws = 100000;
    double power = 0.0;
    otfs::DDFrame w = otfs::DDFrame::zeros(g);
    for (int i = 0; i < draws; ++i) {
        for (auto& z : w.values) z = rng.circular_normal(1.0);
        const auto eq = otfs::zf_equalize(w, d);
        for (const auto& z : eq.values) power += std::norm(z);
    }
    CHECK(power / (static_cast<double>(draws) * g.bins()) ==
          doctest::Approx(phi).epsilon(0.01));
}
