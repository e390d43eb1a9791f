#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace dpfbmc {

enum class FilterKind { Srrc, Phydyas, Rect };

std::string_view to_string(FilterKind kind);
FilterKind parse_filter_kind(std::string_view name);

/// Real FIR prototype pulse of length overlap * samples_per_symbol.
///
/// Every design is normalized to unit energy. SRRC taps sit on the half-sample
/// grid centered at (L-1)/2; PHYDYAS taps sit on the integer grid and are
/// symmetric about L/2, which is the delay the synthesis exponent assumes.
struct PrototypeFilter {
    FilterKind kind = FilterKind::Rect;
    std::size_t samples_per_symbol = 0; // N
    std::size_t overlap = 1;            // K
    std::optional<double> rolloff;      // SRRC only
    std::vector<double> coeffs;

    std::size_t length() const { return coeffs.size(); }
    double energy() const;
    // Index about which the taps are mirror-symmetric (may be a half index).
    double symmetry_center() const;
};

PrototypeFilter design_srrc(std::size_t n, std::size_t k, double rolloff);
PrototypeFilter design_phydyas(std::size_t n, std::size_t k);
PrototypeFilter design_rect(std::size_t n);

// Published frequency-sampling coefficients H_0..H_{K-1} for K in {2,3,4}.
std::vector<double> phydyas_frequency_coefficients(std::size_t k);

// Largest |h| outside the main lobe relative to the peak. The main lobe ends at
// the first local minimum of |h| on either side of the peak.
double max_sidelobe_ratio(const PrototypeFilter& h);

// Max deviation from mirror symmetry about symmetry_center().
double symmetry_error(const PrototypeFilter& h);

} // namespace dpfbmc
