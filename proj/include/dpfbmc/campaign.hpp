#pragma once

#include "dpfbmc/filters.hpp"
#include "dpfbmc/metrics.hpp"
#include "dpfbmc/polarization.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dpfbmc {

// Auto: ccdf and frame truncate, psd writes both variants.
enum class TruncateMode { Auto, On, Off };

/// One scenario of a simulation campaign. Persisted as flat key=value text.
struct ScenarioConfig {
    Waveform waveform = Waveform::Fbmc;
    FilterKind filter = FilterKind::Srrc;
    std::size_t overlap = 4;
    std::optional<double> rolloff; // SRRC; defaults to 2/K
    std::size_t subcarriers = 64;
    std::size_t symbols_per_frame = 32;
    std::size_t n_frames = 1000;
    unsigned qam_order = 16;
    std::uint64_t seed = 1;
    std::size_t cp_len = 0;
    std::size_t window_len = 0;
    TruncateMode truncate = TruncateMode::Auto;
    std::size_t oversample = 1;
    std::string output_dir = ".";
    bool zero_symbols = false;
    double gamma_min_db = 4.0;
    double gamma_max_db = 10.0;
    double gamma_step_db = 0.1;
    int interference_dn = 1;
    int interference_dm = 3;

    // Defaults filled in and CP-OFDM pinned to the rectangular pulse. Throws
    // std::invalid_argument on inconsistent values.
    ScenarioConfig resolved() const;

    // <waveform>_<filter>_N<N>_K<K>
    std::string file_stem() const;

    // Prototype filter at `oversample` samples per subcarrier.
    PrototypeFilter design_filter(std::size_t oversample_factor) const;
};

// Sets one field from its key=value text form; throws std::invalid_argument.
void apply_setting(ScenarioConfig& cfg, const std::string& key, const std::string& value);
std::vector<std::string> config_keys();

ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string format_config(const ScenarioConfig& cfg);

struct FrameSignals {
    BasebandSignal h;
    std::optional<BasebandSignal> v; // dual-polarization waveforms only
};

// Frame `index` of the campaign; symbols depend only on (seed, index).
FrameSignals generate_frame(const ScenarioConfig& cfg, const PrototypeFilter& h, std::size_t index);

struct PaprSamples {
    std::vector<std::vector<double>> h; // per frame, per window
    std::vector<std::vector<double>> v;

    std::vector<double> pooled_h() const;
    std::vector<double> pooled_v() const;
};

PaprSamples simulate_papr(const ScenarioConfig& cfg, unsigned threads);

struct CcdfRun {
    std::vector<std::filesystem::path> files;
    PaprSamples samples;
    CcdfCurve empirical;
    std::vector<AnalyticCcdfModel> analytic;
};

struct PsdRun {
    std::vector<std::filesystem::path> files;
    std::optional<PsdCurve> full;
    std::optional<PsdCurve> truncated;
};

struct FileRun {
    std::vector<std::filesystem::path> files;
};

CcdfRun run_ccdf(const ScenarioConfig& cfg, unsigned threads = 1);
PsdRun run_psd(const ScenarioConfig& cfg, unsigned threads = 1);
FileRun run_frame(const ScenarioConfig& cfg);
FileRun run_filters(const ScenarioConfig& cfg);
FileRun run_interference(const ScenarioConfig& cfg);

} // namespace dpfbmc
