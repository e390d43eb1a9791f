#include "dpfbmc/metrics.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace dpfbmc;
using dpfbmc::test::random_oqam;

namespace {

std::vector<cdouble> tone(std::size_t len, double f, double amp = 1.0)
{
    std::vector<cdouble> x(len);
    for (std::size_t i = 0; i < len; ++i)
        x[i] = std::polar(amp, 2.0 * std::numbers::pi * f * double(i));
    return x;
}

// Shift sum computed the slow way: every integer m, then bounds.
double brute_shift_sum(const PrototypeFilter& h, long k, long n, bool even_only)
{
    double s = 0.0;
    for (long m = -1000; m <= 1000; ++m) {
        if (even_only && m % 2 != 0)
            continue;
        const long idx = k - m * n / 2;
        if (idx >= 0 && idx < long(h.length()))
            s += h.coeffs[std::size_t(idx)] * h.coeffs[std::size_t(idx)];
    }
    return s;
}

BasebandSignal zeros(std::size_t n, std::size_t k, std::size_t len)
{
    BasebandSignal x;
    x.subcarriers = n;
    x.overlap = k;
    x.samples.assign(len, cdouble{});
    return x;
}

} // namespace

TEST_CASE("papr: constant envelope is 1")
{
    std::vector<cdouble> x(64, cdouble{0.3, -0.4});
    for (double p : papr_windows(x, 16))
        CHECK(p == doctest::Approx(1.0));
    for (double p : papr_windows(tone(64, 0.125), 16))
        CHECK(p == doctest::Approx(1.0));
}

TEST_CASE("papr: two equal tones give 2")
{
    auto a = tone(64, 1.0 / 64);
    const auto b = tone(64, 5.0 / 64);
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] += b[i];
    const auto p = papr_windows(a, 64);
    REQUIRE(p.size() == 1);
    CHECK(p[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("papr: window geometry and errors")
{
    std::vector<cdouble> x(70, cdouble{1.0, 0.0});
    x[3] = 2.0;
    const auto p = papr_windows(x, 16);
    CHECK(p.size() == 4);
    CHECK(p[0] == doctest::Approx(4.0 / ((15.0 + 4.0) / 16.0)));
    CHECK_THROWS_AS(papr_windows(std::span<const cdouble>(x.data(), 10), 16), std::invalid_argument);
    CHECK_THROWS_AS(papr_windows(x, 0), std::invalid_argument);
    CHECK(papr_windows(std::vector<cdouble>(16), 16)[0] == 1.0);
}

TEST_CASE("empirical ccdf examples")
{
    const std::vector<double> ones{1, 1, 1};
    const std::vector<double> g0{0.0};
    CHECK(empirical_ccdf(ones, g0).prob[0] == 1.0);
    const std::vector<double> two{1, 10};
    const std::vector<double> g5{5.0};
    CHECK(empirical_ccdf(two, g5).prob[0] == 0.5);
    const std::vector<double> g20{20.0};
    CHECK(empirical_ccdf(two, g20).prob[0] == 0.0);
    CHECK(empirical_ccdf(two, g5).n_samples == 2);
}

TEST_CASE("property: empirical ccdf is non-increasing in gamma")
{
    std::mt19937_64 rng(3);
    std::exponential_distribution<double> e(1.0);
    std::vector<double> v(5000);
    for (auto& x : v)
        x = 1.0 + e(rng);
    const auto c = empirical_ccdf(v, default_gamma_grid());
    for (std::size_t i = 1; i < c.prob.size(); ++i)
        CHECK(c.prob[i] <= c.prob[i - 1]);
    CHECK(c.prob.front() <= 1.0);
    CHECK(c.prob.back() >= 0.0);
}

TEST_CASE("empirical papr quantile")
{
    std::vector<double> v;
    for (int i = 1; i <= 100; ++i)
        v.push_back(i);
    const double q = empirical_papr_db(v, 0.1);
    // 10% of the values are >= the returned threshold.
    const std::vector<double> g{q};
    CHECK(empirical_ccdf(v, g).prob[0] == doctest::Approx(0.1));
}

TEST_CASE("gamma grid")
{
    const auto g = default_gamma_grid();
    CHECK(g.size() == 61);
    CHECK(g.front() == 4.0);
    CHECK(g.back() == doctest::Approx(10.0));
    CHECK_THROWS_AS(gamma_grid(5, 4, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(gamma_grid(4, 5, 0.0), std::invalid_argument);
}

TEST_CASE("analytic alpha: rectangular pulse")
{
    for (std::size_t n : {4u, 16u, 64u, 256u}) {
        const auto all = analytic_alpha(design_rect(n), n, ParityMask::All);
        const auto even = analytic_alpha(design_rect(n), n, ParityMask::EvenOnly);
        for (double a : all.alpha)
            CHECK(a == doctest::Approx(1.0).epsilon(1e-14));
        for (double a : even.alpha)
            CHECK(a == doctest::Approx(2.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(analytic_alpha(design_rect(15), 15, ParityMask::All), std::invalid_argument);
    CHECK_THROWS_AS(analytic_alpha(design_rect(16), 32, ParityMask::All), std::invalid_argument);
}

TEST_CASE("analytic alpha matches a brute-force shift sum")
{
    for (const auto& h : {design_srrc(32, 4, 0.5), design_srrc(16, 3, 2.0 / 3.0), design_phydyas(32, 4),
                          design_phydyas(16, 2)}) {
        const long n = long(h.samples_per_symbol);
        for (bool even : {false, true}) {
            const auto m = analytic_alpha(h, std::size_t(n), even ? ParityMask::EvenOnly : ParityMask::All);
            for (long k = 0; k < n; ++k)
                CHECK(m.alpha[std::size_t(k)] ==
                      doctest::Approx(2.0 / (double(n) * brute_shift_sum(h, k, n, even))).epsilon(1e-13));
        }
    }
}

TEST_CASE("analytic ccdf limits and classical case")
{
    const auto h = design_srrc(64, 4, 0.5);
    const auto m = analytic_alpha(h, 64, ParityMask::All);
    CHECK(analytic_ccdf_at(m, 1e-9) == doctest::Approx(1.0));
    CHECK(analytic_ccdf_at(m, 1e6) == 0.0);
    const auto c = analytic_ccdf(m, default_gamma_grid());
    for (std::size_t i = 1; i < c.prob.size(); ++i)
        CHECK(c.prob[i] < c.prob[i - 1]);

    const auto r = analytic_alpha(design_rect(64), 64, ParityMask::All);
    for (double g : {1.0, 3.0, 8.0, 12.0})
        CHECK(analytic_ccdf_at(r, g) == doctest::Approx(classical_ofdm_ccdf(64, g)).epsilon(1e-13));

    const double p3 = analytic_papr_db(m, 1e-3);
    CHECK(analytic_ccdf_at(m, std::pow(10.0, p3 / 10.0)) == doctest::Approx(1e-3).epsilon(1e-8));
    CHECK_THROWS_AS(analytic_papr_db(m, 1.0), std::invalid_argument);
}

TEST_CASE("sample variance follows the shift sum")
{
    // E|x_k|^2 = sigma_a^2 * N * sum_m h^2[k - mN/2] with unit-variance real OQAM
    // entries becomes N * sum * E[a^2]; ratios between k are what the model uses.
    const std::size_t n = 16;
    const auto h = design_srrc(n, 4, 0.5);
    const auto model = analytic_alpha(h, n, ParityMask::All);
    std::vector<double> acc(n);
    const std::size_t frames = 100000;
    std::size_t count = 0;
    for (std::uint64_t seed = 0; seed < frames; ++seed) {
        const auto x = synthesize_ppn(random_oqam(n, 8, seed, 4), h);
        // Interior symbol period, away from ramp-up.
        for (std::size_t k = 0; k < n; ++k)
            acc[k] += std::norm(x.samples[4 * n + k]);
        ++count;
    }
    // QPSK real parts are +-1/sqrt2 * norm: E[a^2] = 1/2 per entry.
    for (std::size_t k = 0; k < n; ++k) {
        const double sigma2 = acc[k] / double(count);
        const double expected = 2.0 / model.alpha[k] * 0.5; // N * sum * 1/2
        CHECK(sigma2 == doctest::Approx(expected).epsilon(0.02));
    }
}

TEST_CASE("truncate_tails")
{
    auto x = zeros(512, 4, 512 * 4 + 100);
    CHECK(tail_length(x) == 512);
    CHECK(truncate_tails(x).size() == 100 + 512 * 2);
    x = zeros(512, 2, 1000);
    CHECK(tail_length(x) == 0);
    CHECK(truncate_tails(x).size() == 1000);
    x = zeros(64, 3, 500);
    CHECK(tail_length(x) == 32);
    CHECK(truncate_tails(x).size() == 500 - 64);
    x = zeros(64, 4, 100);
    CHECK_THROWS_AS(truncate_tails(x), std::invalid_argument);
    x = zeros(64, 4, 1000);
    x.samples[64] = 5.0;
    x.samples[63] = 7.0;
    CHECK(truncate_tails(x).samples[0] == cdouble{5.0});
}

TEST_CASE("psd: tone peak")
{
    const auto x = tone(4096, 0.125);
    const auto p = welch_power(x, 256, 128, 64);
    const auto f = psd_frequencies(256);
    const auto curve = normalize_psd(p, false);
    const auto peak = std::max_element(curve.power_db.begin(), curve.power_db.end()) - curve.power_db.begin();
    CHECK(f[std::size_t(peak)] == doctest::Approx(0.125));
    CHECK(curve.power_db[std::size_t(peak)] == doctest::Approx(0.0));
    CHECK(f.front() == doctest::Approx(-0.5));
    CHECK(f[128] == 0.0);
}

TEST_CASE("psd: white noise is flat")
{
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cdouble> x(256 * 202);
    for (auto& v : x)
        v = {g(rng), g(rng)};
    const auto p = welch_power(x, 256, 256, 128);
    double mean = 0.0;
    for (double v : p)
        mean += v;
    mean /= double(p.size());
    for (double v : p)
        CHECK(std::abs(10.0 * std::log10(v / mean)) < 1.5);
}

TEST_CASE("center_band moves the occupied band to DC")
{
    BasebandSignal x;
    x.subcarriers = 16;
    x.oversample = 4;
    x.overlap = 1;
    // Subcarrier 8 of 16 at P = 64 sits at 8/64; band center is (N-1)/2 / P.
    x.samples = tone(64 * 64, 7.5 / 64);
    const auto y = center_band(x);
    const auto p = psd_periodogram(y, 512, 256, 128);
    const auto peak = std::max_element(p.power_db.begin(), p.power_db.end()) - p.power_db.begin();
    CHECK(std::abs(p.freq[std::size_t(peak)]) < 1.0 / 512 + 1e-12);
}

TEST_CASE("pairwise sum")
{
    std::vector<double> v(1000001, 0.1);
    CHECK(pairwise_sum(v) == doctest::Approx(100000.1).epsilon(1e-14));
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
    const std::vector<std::vector<double>> rows{{1, 2}, {3, 4}, {5, 6}};
    CHECK(pairwise_sum_rows(rows) == std::vector<double>{9, 12});
}

TEST_CASE("mean_power_beyond_db")
{
    PsdCurve c;
    c.freq = {-0.5, -0.25, 0.0, 0.25};
    c.power_db = {-20.0, 0.0, 0.0, -20.0};
    CHECK(mean_power_beyond_db(c, 0.3) == doctest::Approx(-20.0));
    CHECK(mean_power_beyond_db(c, 0.25) == doctest::Approx(10.0 * std::log10((0.01 + 1.0 + 0.01) / 3.0)));
}

TEST_CASE("intrinsic interference tables")
{
    const auto h = design_phydyas(32, 4);
    const auto t = intrinsic_interference(h, Waveform::Fbmc, {});
    CHECK(t.entries.size() == 3 * 7);
    CHECK(t.pilot_real == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::abs(t.pilot_imag) < 1e-9);
    // Direct neighbours of PHYDYAS carry the known ~0.56 purely imaginary leak.
    for (const auto& e : t.entries)
        if (e.dn == 0 && std::abs(e.dm) == 1)
            CHECK(e.magnitude == doctest::Approx(0.5644).epsilon(0.01));

    const auto s1 = intrinsic_interference(h, Waveform::DpS1, {});
    for (const auto& e : s1.entries)
        CHECK(e.dm % 2 == 0);
    CHECK(s1.entries.size() == 3 * 3);
    CHECK(s1.interference_power() < t.interference_power());
    const auto s2 = intrinsic_interference(h, Waveform::DpS2, {});
    for (const auto& e : s2.entries)
        CHECK(e.dn % 2 == 0);
    const auto s3 = intrinsic_interference(h, Waveform::DpS3, {});
    for (const auto& e : s3.entries)
        CHECK((e.dn + e.dm) % 2 == 0);
    CHECK_THROWS_AS(intrinsic_interference(h, Waveform::CpOfdm, {}), std::invalid_argument);
}
