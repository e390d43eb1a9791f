#include "dpfbmc/modem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dpfbmc {

namespace {

struct Geometry {
    std::size_t subcarriers;
    std::size_t oversample;
    std::size_t period; // P = N * Q
    std::size_t taps;   // L
    std::size_t overlap;
};

Geometry check_geometry(std::size_t subcarriers, const PrototypeFilter& h)
{
    if (subcarriers == 0)
        throw std::invalid_argument("modem: grid has no subcarriers");
    const std::size_t p = h.samples_per_symbol;
    if (p == 0 || p % subcarriers != 0)
        throw std::invalid_argument("modem: filter samples per symbol (" + std::to_string(p) +
                                    ") is not a multiple of the subcarrier count (" +
                                    std::to_string(subcarriers) + ")");
    if (p % 2 != 0)
        throw std::invalid_argument("modem: samples per symbol must be even for half-symbol staggering");
    if (h.length() != h.overlap * p)
        throw std::invalid_argument("modem: filter length does not equal K * N");
    return {subcarriers, p / subcarriers, p, h.length(), h.overlap};
}

// e^{j pi i / P} for i in [0, 2P).
std::vector<cdouble> half_twiddles(std::size_t period)
{
    std::vector<cdouble> tw(2 * period);
    for (std::size_t i = 0; i < tw.size(); ++i)
        tw[i] = std::polar(1.0, std::numbers::pi * static_cast<double>(i) / static_cast<double>(period));
    return tw;
}

// Index into half_twiddles for e^{j pi n (2k - L) / P}.
std::size_t carrier_index(std::size_t n, long two_k_minus_l, std::size_t period)
{
    const long mod = static_cast<long>(2 * period);
    long r = (static_cast<long>(n) * (two_k_minus_l % mod)) % mod;
    if (r < 0)
        r += mod;
    return static_cast<std::size_t>(r);
}

BasebandSignal empty_frame(const OqamGrid& a, const Geometry& g)
{
    if (a.symbols == 0)
        throw std::invalid_argument("modem: grid has no symbols");
    BasebandSignal x;
    x.subcarriers = g.subcarriers;
    x.symbols = a.symbols;
    x.overlap = g.overlap;
    x.oversample = g.oversample;
    x.samples.assign(fbmc_frame_length(g.period, a.symbols, g.overlap), cdouble{});
    return x;
}

} // namespace

std::size_t fbmc_frame_length(std::size_t samples_per_symbol, std::size_t symbols, std::size_t overlap)
{
    if (symbols == 0)
        return 0;
    return (symbols - 1) * samples_per_symbol / 2 + overlap * samples_per_symbol;
}

BasebandSignal synthesize_direct(const OqamGrid& a, const PrototypeFilter& h)
{
    const Geometry g = check_geometry(a.subcarriers, h);
    BasebandSignal x = empty_frame(a, g);
    const auto tw = half_twiddles(g.period);
    const long len = static_cast<long>(g.taps);

    for (std::size_t m = 0; m < a.symbols; ++m) {
        const std::size_t start = m * g.period / 2;
        for (std::size_t n = 0; n < a.subcarriers; ++n) {
            const double amp = a.at(n, m);
            if (amp == 0.0)
                continue;
            const cdouble sym = amp * phase_rotor(n, m);
            for (std::size_t j = 0; j < g.taps; ++j) {
                const long k = static_cast<long>(start + j);
                x.samples[start + j] += sym * h.coeffs[j] * tw[carrier_index(n, 2 * k - len, g.period)];
            }
        }
    }
    return x;
}

BasebandSignal synthesize_ppn(const OqamGrid& a, const PrototypeFilter& h)
{
    const Geometry g = check_geometry(a.subcarriers, h);
    if (!is_power_of_two(g.period))
        throw std::invalid_argument("synthesize_ppn: samples per symbol must be a power of two");
    BasebandSignal x = empty_frame(a, g);

    // With k = mP/2 + j the carrier term factors into e^{j2pi n j/P} (the IFFT),
    // (-1)^{nm} from the half-symbol hop and (-1)^{nK} from the L/2 delay.
    std::vector<cdouble> block(g.period);
    for (std::size_t m = 0; m < a.symbols; ++m) {
        std::fill(block.begin(), block.end(), cdouble{});
        for (std::size_t n = 0; n < a.subcarriers; ++n) {
            const bool flip = ((n * m) + (n * g.overlap)) % 2 != 0;
            const double amp = flip ? -a.at(n, m) : a.at(n, m);
            block[n] = amp * phase_rotor(n, m);
        }
        fft_inplace(block, FftDirection::Backward);

        // Polyphase network: branch r of the K*P taps weights the periodic
        // extension of the IFFT output.
        cdouble* out = x.samples.data() + m * g.period / 2;
        for (std::size_t j = 0; j < g.taps; ++j)
            out[j] += h.coeffs[j] * block[j % g.period];
    }
    return x;
}

ComplexGrid demodulate_complex(const BasebandSignal& x, const PrototypeFilter& h,
                               std::size_t subcarriers, std::size_t symbols)
{
    const Geometry g = check_geometry(subcarriers, h);
    if (x.samples.size() != fbmc_frame_length(g.period, symbols, g.overlap))
        throw std::invalid_argument("demodulate: signal length does not match (N, M, K)");
    const auto tw = half_twiddles(g.period);
    const long len = static_cast<long>(g.taps);

    ComplexGrid out(subcarriers, symbols);
    std::vector<cdouble> seg(g.taps);
    for (std::size_t m = 0; m < symbols; ++m) {
        const std::size_t start = m * g.period / 2;
        for (std::size_t j = 0; j < g.taps; ++j)
            seg[j] = x.samples[start + j] * h.coeffs[j];
        for (std::size_t n = 0; n < subcarriers; ++n) {
            cdouble acc{};
            for (std::size_t j = 0; j < g.taps; ++j) {
                const long k = static_cast<long>(start + j);
                acc += seg[j] * std::conj(tw[carrier_index(n, 2 * k - len, g.period)]);
            }
            out.at(n, m) = acc * std::conj(phase_rotor(n, m));
        }
    }
    return out;
}

OqamGrid demodulate(const BasebandSignal& x, const PrototypeFilter& h, std::size_t subcarriers,
                    std::size_t symbols)
{
    const ComplexGrid c = demodulate_complex(x, h, subcarriers, symbols);
    OqamGrid out(subcarriers, symbols);
    for (std::size_t i = 0; i < c.v.size(); ++i)
        out.a[i] = c.v[i].real();
    return out;
}

BasebandSignal cp_ofdm_modulate(const QamGrid& g, std::size_t cp_len, std::size_t window_len,
                                std::size_t oversample)
{
    const std::size_t n = g.subcarriers;
    if (n == 0 || g.symbols == 0)
        throw std::invalid_argument("cp_ofdm: empty grid");
    if (cp_len >= n)
        throw std::invalid_argument("cp_ofdm: cp_len must be < N");
    if (window_len > cp_len)
        throw std::invalid_argument("cp_ofdm: window_len must be <= cp_len");
    if (oversample == 0)
        throw std::invalid_argument("cp_ofdm: oversample must be >= 1");

    const std::size_t p = n * oversample;
    const std::size_t cp = cp_len * oversample;
    const std::size_t w = window_len * oversample;
    const std::size_t hop = p + cp;

    BasebandSignal x;
    x.subcarriers = n;
    x.symbols = g.symbols;
    x.overlap = 1;
    x.oversample = oversample;
    x.samples.assign(g.symbols * hop + w, cdouble{});

    std::vector<double> ramp(w);
    for (std::size_t i = 0; i < w; ++i)
        ramp[i] = 0.5 * (1.0 - std::cos(std::numbers::pi * (static_cast<double>(i) + 0.5) /
                                        static_cast<double>(w)));

    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<cdouble> body(p);
    std::vector<cdouble> block(hop + w);
    for (std::size_t l = 0; l < g.symbols; ++l) {
        std::fill(body.begin(), body.end(), cdouble{});
        for (std::size_t k = 0; k < n; ++k)
            body[k] = g.at(k, l);
        fft_inplace(body, FftDirection::Backward);

        // [prefix | body | cyclic suffix], all taken from the periodic body.
        for (std::size_t i = 0; i < block.size(); ++i)
            block[i] = scale * body[(i + p - cp) % p];
        for (std::size_t i = 0; i < w; ++i) {
            block[i] *= ramp[i];
            block[block.size() - 1 - i] *= ramp[i];
        }
        cdouble* out = x.samples.data() + l * hop;
        for (std::size_t i = 0; i < block.size(); ++i)
            out[i] += block[i];
    }
    return x;
}

} // namespace dpfbmc
