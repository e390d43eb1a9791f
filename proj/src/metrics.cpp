#include "dpfbmc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dpfbmc {

std::vector<double> gamma_grid(double lo_db, double hi_db, double step_db)
{
    if (!(step_db > 0.0) || hi_db < lo_db)
        throw std::invalid_argument("gamma_grid: bad range");
    const auto count = static_cast<std::size_t>(std::floor((hi_db - lo_db) / step_db + 1e-9)) + 1;
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = lo_db + static_cast<double>(i) * step_db;
    return g;
}

std::vector<double> default_gamma_grid() { return gamma_grid(4.0, 10.0, 0.1); }

std::vector<double> papr_windows(std::span<const cdouble> x, std::size_t win)
{
    if (win == 0)
        throw std::invalid_argument("papr_windows: window length must be >= 1");
    if (x.size() < win)
        throw std::invalid_argument("papr_windows: frame shorter than one window");

    const std::size_t count = x.size() / win;
    std::vector<double> out(count);
    for (std::size_t w = 0; w < count; ++w) {
        double peak = 0.0;
        double sum = 0.0;
        for (std::size_t i = w * win; i < (w + 1) * win; ++i) {
            const double p = std::norm(x[i]);
            peak = std::max(peak, p);
            sum += p;
        }
        // An all-zero window has no defined PAPR; report 0 dB.
        out[w] = sum > 0.0 ? peak * static_cast<double>(win) / sum : 1.0;
    }
    return out;
}

std::vector<double> papr_windows(const BasebandSignal& x, std::size_t win)
{
    return papr_windows(std::span<const cdouble>(x.samples), win);
}

CcdfCurve empirical_ccdf(std::span<const double> papr, std::span<const double> gamma_db, std::string label)
{
    if (papr.empty())
        throw std::invalid_argument("empirical_ccdf: no PAPR values");
    std::vector<double> sorted(papr.begin(), papr.end());
    std::sort(sorted.begin(), sorted.end());

    CcdfCurve c;
    c.gamma_db.assign(gamma_db.begin(), gamma_db.end());
    c.prob.resize(gamma_db.size());
    c.n_samples = sorted.size();
    c.label = std::move(label);
    const auto total = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < gamma_db.size(); ++i) {
        const double threshold = std::pow(10.0, gamma_db[i] / 10.0);
        const auto first = std::lower_bound(sorted.begin(), sorted.end(), threshold);
        c.prob[i] = static_cast<double>(sorted.end() - first) / total;
    }
    return c;
}

double empirical_papr_db(std::span<const double> papr, double prob)
{
    if (papr.empty())
        throw std::invalid_argument("empirical_papr_db: no PAPR values");
    if (!(prob > 0.0 && prob <= 1.0))
        throw std::invalid_argument("empirical_papr_db: probability must lie in (0, 1]");
    std::vector<double> v(papr.begin(), papr.end());
    const auto n = v.size();
    const auto exceed = static_cast<std::size_t>(std::ceil(prob * static_cast<double>(n)));
    const std::size_t idx = n - std::clamp<std::size_t>(exceed, 1, n);
    std::nth_element(v.begin(), v.begin() + static_cast<long>(idx), v.end());
    return 10.0 * std::log10(v[idx]);
}

AnalyticCcdfModel analytic_alpha(const PrototypeFilter& h, std::size_t subcarriers, ParityMask mask)
{
    if (h.samples_per_symbol != subcarriers)
        throw std::invalid_argument("analytic_alpha: filter N does not match subcarrier count");
    if (subcarriers == 0 || subcarriers % 2 != 0)
        throw std::invalid_argument("analytic_alpha: N must be positive and even");

    const long half = static_cast<long>(subcarriers / 2);
    const long len = static_cast<long>(h.length());
    AnalyticCcdfModel model{std::vector<double>(subcarriers), subcarriers, mask};
    for (long k = 0; k < static_cast<long>(subcarriers); ++k) {
        // All m with 0 <= k - m N/2 <= L - 1.
        const long m_lo = -((len - 1 - k) / half);
        const long m_hi = k / half;
        double sum = 0.0;
        for (long m = m_lo; m <= m_hi; ++m) {
            if (mask == ParityMask::EvenOnly && m % 2 != 0)
                continue;
            const double c = h.coeffs[static_cast<std::size_t>(k - m * half)];
            sum += c * c;
        }
        if (!(sum > 0.0))
            throw std::invalid_argument("analytic_alpha: empty shift sum");
        model.alpha[static_cast<std::size_t>(k)] = 2.0 / (static_cast<double>(subcarriers) * sum);
    }
    return model;
}

double analytic_ccdf_at(const AnalyticCcdfModel& model, double gamma)
{
    double log_cdf = 0.0;
    for (double a : model.alpha)
        log_cdf += std::log1p(-std::exp(-a * gamma));
    return -std::expm1(log_cdf);
}

CcdfCurve analytic_ccdf(const AnalyticCcdfModel& model, std::span<const double> gamma_db, std::string label)
{
    CcdfCurve c;
    c.gamma_db.assign(gamma_db.begin(), gamma_db.end());
    c.prob.resize(gamma_db.size());
    c.label = std::move(label);
    for (std::size_t i = 0; i < gamma_db.size(); ++i)
        c.prob[i] = analytic_ccdf_at(model, std::pow(10.0, gamma_db[i] / 10.0));
    return c;
}

double analytic_papr_db(const AnalyticCcdfModel& model, double prob)
{
    if (!(prob > 0.0 && prob < 1.0))
        throw std::invalid_argument("analytic_papr_db: probability must lie in (0, 1)");
    double lo = -30.0;
    double hi = 40.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (analytic_ccdf_at(model, std::pow(10.0, mid / 10.0)) > prob)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double classical_ofdm_ccdf(std::size_t subcarriers, double gamma)
{
    return -std::expm1(static_cast<double>(subcarriers) * std::log1p(-std::exp(-gamma)));
}

std::size_t tail_length(const BasebandSignal& x)
{
    if (x.overlap <= 2)
        return 0;
    return (x.overlap - 2) * x.samples_per_symbol() / 2;
}

BasebandSignal truncate_tails(const BasebandSignal& x)
{
    const std::size_t tail = tail_length(x);
    if (x.size() <= 2 * tail)
        throw std::invalid_argument("truncate_tails: frame too short");
    BasebandSignal out = x;
    out.samples.assign(x.samples.begin() + static_cast<long>(tail),
                       x.samples.end() - static_cast<long>(tail));
    return out;
}

BasebandSignal center_band(const BasebandSignal& x)
{
    // Band center (N - 1) / (2P) cycles/sample: rotate by e^{-j pi (N-1) k / P}.
    const std::size_t p = x.samples_per_symbol();
    if (p == 0)
        throw std::invalid_argument("center_band: signal has no geometry");
    const std::size_t mod = 2 * p;
    const std::size_t step = (x.subcarriers - 1) % mod;
    BasebandSignal out = x;
    for (std::size_t k = 0; k < out.size(); ++k) {
        const std::size_t i = (step * (k % mod)) % mod;
        out.samples[k] *= std::polar(1.0, -std::numbers::pi * static_cast<double>(i) / static_cast<double>(p));
    }
    return out;
}

double pairwise_sum(std::span<const double> v)
{
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v)
            s += x;
        return s;
    }
    const std::size_t mid = v.size() / 2;
    return pairwise_sum(v.subspan(0, mid)) + pairwise_sum(v.subspan(mid));
}

std::vector<double> pairwise_sum_rows(std::span<const std::vector<double>> rows)
{
    if (rows.empty())
        return {};
    if (rows.size() == 1)
        return rows.front();
    const std::size_t mid = rows.size() / 2;
    auto left = pairwise_sum_rows(rows.subspan(0, mid));
    const auto right = pairwise_sum_rows(rows.subspan(mid));
    if (left.size() != right.size())
        throw std::invalid_argument("pairwise_sum_rows: ragged rows");
    for (std::size_t i = 0; i < left.size(); ++i)
        left[i] += right[i];
    return left;
}

std::vector<double> psd_frequencies(std::size_t nfft)
{
    std::vector<double> f(nfft);
    const long half = static_cast<long>(nfft / 2);
    for (std::size_t i = 0; i < nfft; ++i)
        f[i] = static_cast<double>(static_cast<long>(i) - half) / static_cast<double>(nfft);
    return f;
}

std::vector<double> welch_power(std::span<const cdouble> x, std::size_t nfft, std::size_t segment_len,
                                std::size_t overlap)
{
    if (segment_len == 0 || segment_len > x.size())
        throw std::invalid_argument("welch_power: segment length must be in [1, signal length]");
    if (overlap >= segment_len)
        throw std::invalid_argument("welch_power: overlap must be smaller than the segment");
    if (nfft < segment_len)
        throw std::invalid_argument("welch_power: nfft must be >= segment length");

    std::vector<double> window(segment_len);
    double window_energy = 0.0;
    for (std::size_t i = 0; i < segment_len; ++i) {
        window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                         static_cast<double>(segment_len));
        window_energy += window[i] * window[i];
    }

    const std::size_t hop = segment_len - overlap;
    const long half = static_cast<long>(nfft / 2);
    std::vector<std::vector<double>> segments;
    std::vector<cdouble> buf(nfft);
    for (std::size_t start = 0; start + segment_len <= x.size(); start += hop) {
        std::fill(buf.begin(), buf.end(), cdouble{});
        for (std::size_t i = 0; i < segment_len; ++i)
            buf[i] = x[start + i] * window[i];
        fft_inplace(buf, FftDirection::Forward);
        std::vector<double> row(nfft);
        for (std::size_t i = 0; i < nfft; ++i) {
            long bin = static_cast<long>(i) - half;
            if (bin < 0)
                bin += static_cast<long>(nfft);
            row[i] = std::norm(buf[static_cast<std::size_t>(bin)]) / window_energy;
        }
        segments.push_back(std::move(row));
    }

    auto power = pairwise_sum_rows(segments);
    const auto count = static_cast<double>(segments.size());
    for (double& p : power)
        p /= count;
    return power;
}

PsdCurve normalize_psd(std::span<const double> power, bool truncated)
{
    if (power.empty())
        throw std::invalid_argument("normalize_psd: empty spectrum");
    const double peak = *std::max_element(power.begin(), power.end());
    if (!(peak > 0.0))
        throw std::invalid_argument("normalize_psd: spectrum has no power");
    PsdCurve c;
    c.freq = psd_frequencies(power.size());
    c.power_db.resize(power.size());
    c.truncated = truncated;
    for (std::size_t i = 0; i < power.size(); ++i)
        c.power_db[i] = 10.0 * std::log10(std::max(power[i] / peak, 1e-30));
    return c;
}

PsdCurve psd_periodogram(const BasebandSignal& x, std::size_t nfft, std::size_t segment_len,
                         std::size_t overlap)
{
    return normalize_psd(welch_power(x.samples, nfft, segment_len, overlap), false);
}

double mean_power_beyond_db(const PsdCurve& psd, double edge)
{
    std::vector<double> lin;
    for (std::size_t i = 0; i < psd.freq.size(); ++i)
        if (std::abs(psd.freq[i]) >= edge)
            lin.push_back(std::pow(10.0, psd.power_db[i] / 10.0));
    if (lin.empty())
        throw std::invalid_argument("mean_power_beyond_db: no bins beyond edge");
    return 10.0 * std::log10(pairwise_sum(lin) / static_cast<double>(lin.size()));
}

double InterferenceTable::interference_power() const
{
    double p = 0.0;
    for (const auto& e : entries)
        if (e.dn != 0 || e.dm != 0)
            p += e.magnitude * e.magnitude;
    return p;
}

InterferenceTable intrinsic_interference(const PrototypeFilter& h, Waveform w, Neighborhood nb)
{
    if (w == Waveform::CpOfdm)
        throw std::invalid_argument("intrinsic_interference: needs an FBMC waveform");
    if (nb.dn < 0 || nb.dm < 0)
        throw std::invalid_argument("intrinsic_interference: negative neighborhood");

    const std::size_t n = h.samples_per_symbol;
    const auto dn = static_cast<std::size_t>(nb.dn);
    const auto dm = static_cast<std::size_t>(nb.dm);
    const std::size_t n0 = (n / 2) & ~std::size_t{1};
    if (n0 < dn || n0 + dn >= n)
        throw std::invalid_argument("intrinsic_interference: subcarrier neighborhood exceeds N");
    // Even pilot position, far enough from both frame ends for every neighbor.
    const std::size_t m0 = 2 * (dm + h.overlap);
    const std::size_t symbols = 2 * m0 + 2;

    OqamGrid pilot(n, symbols);
    pilot.at(n0, m0) = 1.0;
    const auto structure = structure_of(w);
    const BasebandSignal x = structure ? synthesize_dp(pilot, h, *structure).h_signal
                                       : synthesize_ppn(pilot, h);
    const ComplexGrid out = demodulate_complex(x, h, n, symbols);

    InterferenceTable t;
    t.pilot_real = out.at(n0, m0).real();
    t.pilot_imag = out.at(n0, m0).imag();
    for (int i = -nb.dn; i <= nb.dn; ++i) {
        for (int j = -nb.dm; j <= nb.dm; ++j) {
            const auto nn = static_cast<std::size_t>(static_cast<long>(n0) + i);
            const auto mm = static_cast<std::size_t>(static_cast<long>(m0) + j);
            if (structure && !on_h_branch(*structure, nn, mm))
                continue;
            t.entries.push_back({i, j, std::abs(out.at(nn, mm))});
        }
    }
    return t;
}

} // namespace dpfbmc
