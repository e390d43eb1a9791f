#pragma once

#include "dpfbmc/fft.hpp"
#include "dpfbmc/filters.hpp"
#include "dpfbmc/mapping.hpp"

#include <cstddef>
#include <vector>

namespace dpfbmc {

/// Complex baseband frame with its geometry.
///
/// samples_per_symbol() = subcarriers * oversample is the symbol period T in
/// samples. FBMC frames carry the full overlap-add extent including the filter
/// ramp-up and ramp-down tails.
struct BasebandSignal {
    std::vector<cdouble> samples;
    std::size_t subcarriers = 0;
    std::size_t symbols = 0; // OQAM symbols for FBMC, OFDM symbols for CP-OFDM
    std::size_t overlap = 1;
    std::size_t oversample = 1;

    std::size_t samples_per_symbol() const { return subcarriers * oversample; }
    std::size_t size() const { return samples.size(); }
};

struct ComplexGrid {
    std::size_t subcarriers = 0;
    std::size_t symbols = 0;
    std::vector<cdouble> v; // row-major [n][m]

    ComplexGrid() = default;
    ComplexGrid(std::size_t n, std::size_t m) : subcarriers(n), symbols(m), v(n * m) {}
    cdouble& at(std::size_t n, std::size_t m) { return v[n * symbols + m]; }
    const cdouble& at(std::size_t n, std::size_t m) const { return v[n * symbols + m]; }
};

// (M - 1) * P / 2 + K * P with P = samples per symbol.
std::size_t fbmc_frame_length(std::size_t samples_per_symbol, std::size_t symbols, std::size_t overlap);

// The filter's samples_per_symbol must be a multiple of a.subcarriers; the
// ratio is the oversampling factor. Subcarrier n sits at n / P cycles/sample.
BasebandSignal synthesize_direct(const OqamGrid& a, const PrototypeFilter& h);
BasebandSignal synthesize_ppn(const OqamGrid& a, const PrototypeFilter& h);

// Matched-filter bank, Re{} taken after removing the lattice phase.
OqamGrid demodulate(const BasebandSignal& x, const PrototypeFilter& h, std::size_t subcarriers,
                    std::size_t symbols);
// Same correlation before Re{}; the imaginary part carries the intrinsic interference.
ComplexGrid demodulate_complex(const BasebandSignal& x, const PrototypeFilter& h,
                               std::size_t subcarriers, std::size_t symbols);

// Unitary-scaled (1/sqrt(N)) inverse FFT per symbol, cyclic prefix, and an
// optional raised-cosine edge taper of window_len samples overlapping the
// next symbol. cp_len and window_len are in subcarrier-rate samples.
BasebandSignal cp_ofdm_modulate(const QamGrid& g, std::size_t cp_len, std::size_t window_len,
                                std::size_t oversample = 1);

} // namespace dpfbmc
