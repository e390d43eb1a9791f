#include "dpfbmc/filters.hpp"

#include "dpfbmc/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dpfbmc {

namespace {

void normalize_unit_energy(std::vector<double>& taps)
{
    double e = 0.0;
    for (double t : taps)
        e += t * t;
    if (!(e > 0.0))
        throw std::runtime_error("prototype filter has zero energy");
    const double scale = 1.0 / std::sqrt(e);
    for (double& t : taps)
        t *= scale;
}

// Root raised cosine with unit symbol period, evaluated at x = t / T.
double srrc_pulse(double x, double alpha)
{
    constexpr double pi = std::numbers::pi;
    constexpr double eps = 1e-9;
    if (std::abs(x) < eps)
        return 1.0 - alpha + 4.0 * alpha / pi;
    if (std::abs(std::abs(x) - 1.0 / (4.0 * alpha)) < eps) {
        const double a = pi / (4.0 * alpha);
        return alpha / std::numbers::sqrt2 *
               ((1.0 + 2.0 / pi) * std::sin(a) + (1.0 - 2.0 / pi) * std::cos(a));
    }
    const double num = std::sin(pi * x * (1.0 - alpha)) +
                       4.0 * alpha * x * std::cos(pi * x * (1.0 + alpha));
    const double den = pi * x * (1.0 - (4.0 * alpha * x) * (4.0 * alpha * x));
    return num / den;
}

} // namespace

std::string_view to_string(FilterKind kind)
{
    switch (kind) {
    case FilterKind::Srrc:
        return "srrc";
    case FilterKind::Phydyas:
        return "phydyas";
    case FilterKind::Rect:
        return "rect";
    }
    return "unknown";
}

FilterKind parse_filter_kind(std::string_view name)
{
    if (name == "srrc")
        return FilterKind::Srrc;
    if (name == "phydyas")
        return FilterKind::Phydyas;
    if (name == "rect")
        return FilterKind::Rect;
    throw std::invalid_argument("unknown filter kind '" + std::string(name) + "'");
}

double PrototypeFilter::energy() const
{
    double e = 0.0;
    for (double c : coeffs)
        e += c * c;
    return e;
}

double PrototypeFilter::symmetry_center() const
{
    const auto len = static_cast<double>(length());
    return kind == FilterKind::Phydyas ? len / 2.0 : (len - 1.0) / 2.0;
}

PrototypeFilter design_srrc(std::size_t n, std::size_t k, double rolloff)
{
    if (n == 0 || n % 2 != 0)
        throw std::invalid_argument("srrc: samples per symbol must be positive and even");
    if (k < 1)
        throw std::invalid_argument("srrc: overlapping factor must be >= 1");
    if (!(rolloff > 0.0 && rolloff <= 1.0))
        throw std::invalid_argument("srrc: rolloff must lie in (0, 1]");

    PrototypeFilter h{FilterKind::Srrc, n, k, rolloff, std::vector<double>(n * k)};
    const double center = (static_cast<double>(h.length()) - 1.0) / 2.0;
    for (std::size_t i = 0; i < h.length(); ++i)
        h.coeffs[i] = srrc_pulse((static_cast<double>(i) - center) / static_cast<double>(n), rolloff);
    normalize_unit_energy(h.coeffs);
    return h;
}

std::vector<double> phydyas_frequency_coefficients(std::size_t k)
{
    switch (k) {
    case 2:
        return {1.0, std::numbers::sqrt2 / 2.0};
    case 3:
        return {1.0, 0.911438, 0.411438};
    case 4:
        return {1.0, 0.971960, std::numbers::sqrt2 / 2.0, 0.235147};
    default:
        throw std::invalid_argument("phydyas: overlapping factor must be 2, 3 or 4");
    }
}

PrototypeFilter design_phydyas(std::size_t n, std::size_t k)
{
    const auto coef = phydyas_frequency_coefficients(k);
    if (n == 0 || n % 2 != 0)
        throw std::invalid_argument("phydyas: samples per symbol must be positive and even");

    // Frequency sampling: place G_i = (-1)^i H_|i| on DFT bins -(K-1)..K-1 of an
    // L-point grid and take the inverse DFT.
    const std::size_t len = n * k;
    std::vector<cdouble> spectrum(len, cdouble{});
    spectrum[0] = coef[0];
    for (std::size_t i = 1; i < k; ++i) {
        const double g = (i % 2 == 0 ? 1.0 : -1.0) * coef[i];
        spectrum[i] = g;
        spectrum[len - i] = g;
    }
    fft_inplace(spectrum, FftDirection::Backward);

    PrototypeFilter h{FilterKind::Phydyas, n, k, std::nullopt, std::vector<double>(len)};
    std::transform(spectrum.begin(), spectrum.end(), h.coeffs.begin(),
                   [](cdouble c) { return c.real(); });
    normalize_unit_energy(h.coeffs);
    return h;
}

PrototypeFilter design_rect(std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("rect: length must be >= 1");
    return {FilterKind::Rect, n, 1, std::nullopt,
            std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n)))};
}

double max_sidelobe_ratio(const PrototypeFilter& h)
{
    const auto& c = h.coeffs;
    if (c.empty())
        return 0.0;
    std::size_t peak = 0;
    for (std::size_t i = 1; i < c.size(); ++i)
        if (std::abs(c[i]) > std::abs(c[peak]))
            peak = i;

    std::size_t right = peak;
    while (right + 1 < c.size() && std::abs(c[right + 1]) <= std::abs(c[right]))
        ++right;
    std::size_t left = peak;
    while (left > 0 && std::abs(c[left - 1]) <= std::abs(c[left]))
        --left;

    double side = 0.0;
    for (std::size_t i = 0; i < left; ++i)
        side = std::max(side, std::abs(c[i]));
    for (std::size_t i = right + 1; i < c.size(); ++i)
        side = std::max(side, std::abs(c[i]));
    return side / std::abs(c[peak]);
}

double symmetry_error(const PrototypeFilter& h)
{
    // Mirror index j = 2c - i; pairs falling outside the tap range are skipped.
    const auto twice_center = static_cast<long>(std::lround(2.0 * h.symmetry_center()));
    double err = 0.0;
    for (long i = 0; i < static_cast<long>(h.length()); ++i) {
        const long j = twice_center - i;
        if (j < 0 || j >= static_cast<long>(h.length()))
            continue;
        err = std::max(err, std::abs(h.coeffs[i] - h.coeffs[j]));
    }
    return err;
}

} // namespace dpfbmc
