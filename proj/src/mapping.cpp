#include "dpfbmc/mapping.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace dpfbmc {

namespace {

unsigned gray_to_binary(unsigned g)
{
    unsigned b = g;
    for (unsigned s = g >> 1; s != 0; s >>= 1)
        b ^= s;
    return b;
}

unsigned bits_per_axis(unsigned order)
{
    switch (order) {
    case 4:
        return 1;
    case 16:
        return 2;
    case 64:
        return 3;
    default:
        throw std::invalid_argument("unsupported QAM order " + std::to_string(order) +
                                    " (expected 4, 16 or 64)");
    }
}

} // namespace

std::vector<cdouble> qam_constellation(unsigned order)
{
    const unsigned b = bits_per_axis(order);
    const unsigned levels = 1u << b;
    const double norm = std::sqrt(2.0 * (order - 1) / 3.0);

    auto level = [&](unsigned gray) {
        return (2.0 * gray_to_binary(gray) - (levels - 1.0)) / norm;
    };
    std::vector<cdouble> points(order);
    for (unsigned label = 0; label < order; ++label)
        points[label] = {level(label >> b), level(label & (levels - 1))};
    return points;
}

QamGrid random_qam_grid(std::size_t n, std::size_t symbols, unsigned order, std::uint64_t seed)
{
    const auto points = qam_constellation(order);
    const int shift = 64 - std::countr_zero(order);
    std::mt19937_64 rng(seed);

    QamGrid g(n, symbols, order);
    for (auto& d : g.d)
        d = points[rng() >> shift];
    return g;
}

OqamGrid oqam_stagger(const QamGrid& g)
{
    OqamGrid out(g.subcarriers, 2 * g.symbols);
    for (std::size_t n = 0; n < g.subcarriers; ++n) {
        for (std::size_t l = 0; l < g.symbols; ++l) {
            const cdouble d = g.at(n, l);
            if (n % 2 == 0) {
                out.at(n, 2 * l) = d.real();
                out.at(n, 2 * l + 1) = d.imag();
            } else {
                out.at(n, 2 * l) = d.imag();
                out.at(n, 2 * l + 1) = d.real();
            }
        }
    }
    return out;
}

QamGrid oqam_destagger(const OqamGrid& a)
{
    if (a.symbols % 2 != 0)
        throw std::invalid_argument("oqam_destagger: OQAM symbol count must be even");
    QamGrid g(a.subcarriers, a.symbols / 2);
    for (std::size_t n = 0; n < a.subcarriers; ++n) {
        for (std::size_t l = 0; l < g.symbols; ++l) {
            const double first = a.at(n, 2 * l);
            const double second = a.at(n, 2 * l + 1);
            g.at(n, l) = n % 2 == 0 ? cdouble{first, second} : cdouble{second, first};
        }
    }
    return g;
}

double phase(std::size_t n, std::size_t m)
{
    return std::numbers::pi / 2.0 * static_cast<double>((n + m) % 4);
}

cdouble phase_rotor(std::size_t n, std::size_t m)
{
    static constexpr cdouble rotors[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    return rotors[(n + m) % 4];
}

} // namespace dpfbmc
