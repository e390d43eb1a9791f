#include "dpfbmc/metrics.hpp"
#include "dpfbmc/polarization.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace dpfbmc;
using dpfbmc::test::max_abs_diff;
using dpfbmc::test::random_oqam;

namespace {

bool all_zero(const OqamGrid& g)
{
    return std::all_of(g.a.begin(), g.a.end(), [](double v) { return v == 0.0; });
}

OqamGrid single(std::size_t n, std::size_t m)
{
    OqamGrid g(4, 4);
    g.at(n, m) = 1.5;
    return g;
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v)
            ++i;
        while (j < b.size() && b[j] <= v)
            ++j;
        d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    return d;
}

} // namespace

TEST_CASE("structure I: even m on H, odd m on V")
{
    auto [h0, v0] = multiplex_structure1(single(2, 0));
    CHECK(h0.at(2, 0) == 1.5);
    CHECK(all_zero(v0));
    auto [h1, v1] = multiplex_structure1(single(2, 1));
    CHECK(all_zero(h1));
    CHECK(v1.at(2, 1) == 1.5);
    CHECK_THROWS_AS(multiplex_structure1(OqamGrid(4, 3)), std::invalid_argument);
}

TEST_CASE("structure II: even n on H, odd n on V")
{
    auto [h0, v0] = multiplex_structure2(single(0, 3));
    CHECK(h0.at(0, 3) == 1.5);
    CHECK(all_zero(v0));
    auto [h1, v1] = multiplex_structure2(single(1, 3));
    CHECK(all_zero(h1));
    CHECK(v1.at(1, 3) == 1.5);
}

TEST_CASE("structure III: checkerboard")
{
    auto [h0, v0] = multiplex_structure3(single(0, 0));
    CHECK(h0.at(0, 0) == 1.5);
    CHECK(all_zero(v0));
    auto [h1, v1] = multiplex_structure3(single(0, 1));
    CHECK(all_zero(h1));
    CHECK(v1.at(0, 1) == 1.5);
}

TEST_CASE("property: every structure partitions the grid")
{
    for (auto s : {Structure::S1Tpdm, Structure::S2Fpdm, Structure::S3Tfpdm}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto a = random_oqam(12, 5, seed);
            auto [h, v] = multiplex(a, s);
            for (std::size_t i = 0; i < a.a.size(); ++i) {
                CHECK(h.a[i] * v.a[i] == 0.0);
                CHECK(h.a[i] + v.a[i] == a.a[i]);
            }
            for (std::size_t n = 0; n < a.subcarriers; ++n)
                for (std::size_t m = 0; m < a.symbols; ++m)
                    CHECK((on_h_branch(s, n, m) ? v.at(n, m) : h.at(n, m)) == 0.0);
        }
    }
}

TEST_CASE("synthesize_dp: branches sum to the single-polarization signal")
{
    for (auto s : {Structure::S1Tpdm, Structure::S2Fpdm, Structure::S3Tfpdm}) {
        for (const auto& h : {design_srrc(64, 4, 0.5), design_phydyas(64, 4)}) {
            const auto a = random_oqam(64, 8, 31);
            const auto dp = synthesize_dp(a, h, s);
            CHECK(dp.structure == s);
            REQUIRE(dp.h_signal.size() == dp.v_signal.size());
            BasebandSignal sum = dp.h_signal;
            for (std::size_t i = 0; i < sum.size(); ++i)
                sum.samples[i] += dp.v_signal.samples[i];
            CHECK(max_abs_diff(sum, synthesize_ppn(a, h)) <= 1e-9);
        }
    }
}

TEST_CASE("synthesize_dp: structure I H branch equals synthesis of the masked grid")
{
    const auto h = design_srrc(16, 4, 0.5);
    auto a = random_oqam(16, 6, 4);
    for (std::size_t n = 0; n < a.subcarriers; ++n)
        for (std::size_t m = 1; m < a.symbols; m += 2)
            a.at(n, m) = 0.0;
    const auto dp = synthesize_dp(a, h, Structure::S1Tpdm);
    CHECK(max_abs_diff(dp.h_signal, synthesize_ppn(a, h)) == 0.0);
    for (auto x : dp.v_signal.samples)
        CHECK(x == cdouble{});
}

TEST_CASE("synthesize_dp: zero grid")
{
    const auto dp = synthesize_dp(OqamGrid(16, 4), design_phydyas(16, 4), Structure::S1Tpdm);
    for (auto x : dp.h_signal.samples)
        CHECK(x == cdouble{});
    for (auto x : dp.v_signal.samples)
        CHECK(x == cdouble{});
}

TEST_CASE("structure I branch power profile repeats every N, not N/2")
{
    // Ensemble power at sample k is proportional to the masked shift sum, i.e. 1/alpha_k.
    const auto h = design_phydyas(64, 4);
    const auto even = analytic_alpha(h, 64, ParityMask::EvenOnly);
    const auto all = analytic_alpha(h, 64, ParityMask::All);
    double even_shift = 0.0, all_shift = 0.0;
    for (std::size_t k = 0; k < 32; ++k) {
        even_shift = std::max(even_shift, std::abs(even.alpha[k] - even.alpha[k + 32]));
        all_shift = std::max(all_shift, std::abs(all.alpha[k] - all.alpha[k + 32]));
    }
    CHECK(all_shift < 1e-12);
    CHECK(even_shift > 0.1);

    // The same modulation shows up in the simulated H branch.
    std::vector<double> profile(64);
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto x = synthesize_dp(random_oqam(64, 16, seed), h, Structure::S1Tpdm).h_signal;
        for (std::size_t k = 256; k < 256 + 64 * 4; ++k)
            profile[k % 64] += std::norm(x.samples[k]);
    }
    double hi = 0.0, lo = INFINITY;
    for (std::size_t k = 0; k < 32; ++k) {
        hi = std::max(hi, profile[k] / profile[k + 32]);
        lo = std::min(lo, profile[k] / profile[k + 32]);
    }
    CHECK(hi > 1.2);
    CHECK(lo < 1.0 / 1.2);
}

TEST_CASE("structure I H and V branch PAPR distributions match (KS at 1%)")
{
    for (const auto& h : {design_srrc(64, 4, 0.5), design_phydyas(64, 4)}) {
        std::vector<double> ph, pv;
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            const auto dp = synthesize_dp(random_oqam(64, 32, 1000 + seed), h, Structure::S1Tpdm);
            // Centre window only, so the samples are independent draws of the window CCDF.
            const auto wh = papr_windows(truncate_tails(dp.h_signal), 64);
            const auto wv = papr_windows(truncate_tails(dp.v_signal), 64);
            ph.push_back(wh[wh.size() / 2]);
            pv.push_back(wv[wv.size() / 2]);
        }
        const double d = ks_statistic(ph, pv);
        const double critical = 1.628 * std::sqrt(2.0 / 1000.0);
        MESSAGE(to_string(h.kind) << " KS statistic " << d << " critical " << critical);
        CHECK(d < critical);
    }
}

TEST_CASE("structure I envelope dips deeper with PHYDYAS than with SRRC")
{
    auto depth = [](const PrototypeFilter& h) {
        const auto m = analytic_alpha(h, 64, ParityMask::EvenOnly);
        const auto [lo, hi] = std::minmax_element(m.alpha.begin(), m.alpha.end());
        return *lo / *hi; // power ratio min/max
    };
    const double phy = depth(design_phydyas(64, 4));
    const double srrc = depth(design_srrc(64, 4, 0.5));
    MESSAGE("min/max branch power: phydyas " << phy << " srrc " << srrc);
    CHECK(phy < srrc);
    CHECK(phy < 0.9);
}
