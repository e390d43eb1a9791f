#pragma once

#include "dpfbmc/filters.hpp"
#include "dpfbmc/modem.hpp"
#include "dpfbmc/polarization.hpp"

#include <span>
#include <string>
#include <vector>

namespace dpfbmc {

/// Pr(PAPR >= gamma) sampled on an ascending dB grid.
struct CcdfCurve {
    std::vector<double> gamma_db;
    std::vector<double> prob;
    std::size_t n_samples = 0; // windows pooled; 0 for analytic curves
    std::string label;
};

// Which OQAM symbol offsets m contribute to the shift sum of the analytic model.
enum class ParityMask { All, EvenOnly };

/// Per-sample exponential rates alpha_k, k in [0, N), of the closed-form CCDF
///   Pr(PAPR >= gamma) = 1 - prod_k (1 - exp(-alpha_k gamma)).
struct AnalyticCcdfModel {
    std::vector<double> alpha;
    std::size_t subcarriers = 0;
    ParityMask mask = ParityMask::All;
};

struct PsdCurve {
    std::vector<double> freq;     // cycles/sample, ascending, DC centered
    std::vector<double> power_db; // 0 dB peak
    bool truncated = false;
};

// 4.0, 4.1, ..., 10.0 dB.
std::vector<double> default_gamma_grid();
std::vector<double> gamma_grid(double lo_db, double hi_db, double step_db);

// Linear PAPR of consecutive non-overlapping windows of `win` samples: peak
// power over the window's own mean power. A trailing partial window is dropped.
std::vector<double> papr_windows(std::span<const cdouble> x, std::size_t win);
std::vector<double> papr_windows(const BasebandSignal& x, std::size_t win);

CcdfCurve empirical_ccdf(std::span<const double> papr, std::span<const double> gamma_db,
                         std::string label = {});

// PAPR (dB) exceeded by a fraction `prob` of the values.
double empirical_papr_db(std::span<const double> papr, double prob);

AnalyticCcdfModel analytic_alpha(const PrototypeFilter& h, std::size_t subcarriers, ParityMask mask);
double analytic_ccdf_at(const AnalyticCcdfModel& model, double gamma);
CcdfCurve analytic_ccdf(const AnalyticCcdfModel& model, std::span<const double> gamma_db,
                        std::string label = {});
// Inverse of analytic_ccdf_at, in dB.
double analytic_papr_db(const AnalyticCcdfModel& model, double prob);

// 1 - (1 - e^{-gamma})^N.
double classical_ofdm_ccdf(std::size_t subcarriers, double gamma);

// floor((K/2 - 1) * P) samples, 0 for K <= 2.
std::size_t tail_length(const BasebandSignal& x);
BasebandSignal truncate_tails(const BasebandSignal& x);

// Mixes the occupied subcarrier band (n = 0..N-1) down so its center sits at DC.
BasebandSignal center_band(const BasebandSignal& x);

double pairwise_sum(std::span<const double> v);
// Elementwise pairwise sum of equally sized rows.
std::vector<double> pairwise_sum_rows(std::span<const std::vector<double>> rows);

// Averaged Hann-windowed periodogram, linear scale, DC centered.
std::vector<double> welch_power(std::span<const cdouble> x, std::size_t nfft, std::size_t segment_len,
                                std::size_t overlap);
std::vector<double> psd_frequencies(std::size_t nfft);
PsdCurve normalize_psd(std::span<const double> power, bool truncated);
PsdCurve psd_periodogram(const BasebandSignal& x, std::size_t nfft, std::size_t segment_len,
                         std::size_t overlap);

// Mean of the linear PSD over |f| >= edge, in dB.
double mean_power_beyond_db(const PsdCurve& psd, double edge);

struct Neighborhood {
    int dn = 1;
    int dm = 3;
};

struct InterferenceEntry {
    int dn = 0;
    int dm = 0;
    double magnitude = 0.0;
};

struct InterferenceTable {
    std::vector<InterferenceEntry> entries; // same-polarization positions only
    double pilot_real = 0.0;
    double pilot_imag = 0.0;

    // Sum of magnitude^2 over every entry except the pilot itself.
    double interference_power() const;
};

// Unit pilot at an interior lattice position of the H branch, noiseless
// matched-filter demodulation; magnitudes are of the complex (pre-Re) output.
InterferenceTable intrinsic_interference(const PrototypeFilter& h, Waveform w, Neighborhood nb);

} // namespace dpfbmc
