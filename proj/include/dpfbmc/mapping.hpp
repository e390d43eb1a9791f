#pragma once

#include "dpfbmc/fft.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dpfbmc {

/// Complex QAM symbols d[n][l]: subcarrier n, QAM symbol index l.
struct QamGrid {
    std::size_t subcarriers = 0;
    std::size_t symbols = 0; // L_sym
    unsigned order = 0;      // constellation size; 0 for hand-built grids
    std::vector<cdouble> d;  // row-major [n][l]

    QamGrid() = default;
    QamGrid(std::size_t n, std::size_t l, unsigned ord = 0)
        : subcarriers(n), symbols(l), order(ord), d(n * l)
    {
    }

    cdouble& at(std::size_t n, std::size_t l) { return d[n * symbols + l]; }
    const cdouble& at(std::size_t n, std::size_t l) const { return d[n * symbols + l]; }

    // Per-component variance of the staggered real symbols for a unit-power
    // constellation.
    static constexpr double sigma_a2 = 0.5;
};

/// Real OQAM symbols a[n][m] at twice the QAM rate.
struct OqamGrid {
    std::size_t subcarriers = 0;
    std::size_t symbols = 0; // M
    std::vector<double> a;   // row-major [n][m]

    OqamGrid() = default;
    OqamGrid(std::size_t n, std::size_t m) : subcarriers(n), symbols(m), a(n * m) {}

    double& at(std::size_t n, std::size_t m) { return a[n * symbols + m]; }
    double at(std::size_t n, std::size_t m) const { return a[n * symbols + m]; }
};

// Gray-coded square constellation, unit average power, ordered by the Gray
// label of each point.
std::vector<cdouble> qam_constellation(unsigned order);

QamGrid random_qam_grid(std::size_t n, std::size_t symbols, unsigned order, std::uint64_t seed);

OqamGrid oqam_stagger(const QamGrid& g);
QamGrid oqam_destagger(const OqamGrid& a);

// pi/2 (n + m) reduced to [0, 2pi).
double phase(std::size_t n, std::size_t m);
// e^{j phase(n, m)}, exact.
cdouble phase_rotor(std::size_t n, std::size_t m);

} // namespace dpfbmc
