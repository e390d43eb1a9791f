#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace dpfbmc {

using cdouble = std::complex<double>;

enum class FftDirection { Forward, Backward };

// In-place unnormalized DFT of data.size() points. Backward uses e^{+j2πnk/N}.
// Plans are cached per (size, direction) and shared between threads; the same
// plan is always used for a given size, so results are bit-reproducible.
void fft_inplace(std::span<cdouble> data, FftDirection dir);

constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

} // namespace dpfbmc
