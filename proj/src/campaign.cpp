#include "dpfbmc/campaign.hpp"

#include "dpfbmc/mapping.hpp"
#include "dpfbmc/modem.hpp"
#include "dpfbmc/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace dpfbmc {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& v)
{
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument(key + ": expected a non-negative integer, got '" + v + "'");
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        throw std::invalid_argument(key + ": value out of range '" + v + "'");
    }
}

std::size_t parse_positive(const std::string& key, const std::string& v)
{
    const auto x = parse_u64(key, v);
    if (x == 0)
        throw std::invalid_argument(key + ": must be positive");
    return static_cast<std::size_t>(x);
}

double parse_double(const std::string& key, const std::string& v)
{
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != v.size())
        throw std::invalid_argument(key + ": expected a number, got '" + v + "'");
    return x;
}

int parse_int(const std::string& key, const std::string& v)
{
    const auto x = parse_u64(key, v);
    if (x > 1u << 20)
        throw std::invalid_argument(key + ": value too large");
    return static_cast<int>(x);
}

bool parse_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    throw std::invalid_argument(key + ": expected true/false, got '" + v + "'");
}

std::string_view to_string(TruncateMode t)
{
    switch (t) {
    case TruncateMode::Auto:
        return "auto";
    case TruncateMode::On:
        return "true";
    case TruncateMode::Off:
        return "false";
    }
    return "auto";
}

std::string fmt_num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& setters()
{
    static const std::vector<std::pair<std::string, Setter>> table = {
        {"waveform", [](auto& c, auto&, auto& v) { c.waveform = parse_waveform(v); }},
        {"filter", [](auto& c, auto&, auto& v) { c.filter = parse_filter_kind(v); }},
        {"overlap", [](auto& c, auto& k, auto& v) { c.overlap = parse_positive(k, v); }},
        {"rolloff",
         [](auto& c, auto& k, auto& v) {
             if (v.empty() || v == "auto")
                 c.rolloff.reset();
             else
                 c.rolloff = parse_double(k, v);
         }},
        {"subcarriers", [](auto& c, auto& k, auto& v) { c.subcarriers = parse_positive(k, v); }},
        {"symbols_per_frame", [](auto& c, auto& k, auto& v) { c.symbols_per_frame = parse_positive(k, v); }},
        {"n_frames", [](auto& c, auto& k, auto& v) { c.n_frames = parse_positive(k, v); }},
        {"qam_order", [](auto& c, auto& k, auto& v) { c.qam_order = static_cast<unsigned>(parse_positive(k, v)); }},
        {"seed", [](auto& c, auto& k, auto& v) { c.seed = parse_u64(k, v); }},
        {"cp_len", [](auto& c, auto& k, auto& v) { c.cp_len = parse_u64(k, v); }},
        {"window_len", [](auto& c, auto& k, auto& v) { c.window_len = parse_u64(k, v); }},
        {"truncate",
         [](auto& c, auto& k, auto& v) {
             c.truncate = v == "auto" ? TruncateMode::Auto
                                      : (parse_bool(k, v) ? TruncateMode::On : TruncateMode::Off);
         }},
        {"oversample", [](auto& c, auto& k, auto& v) { c.oversample = parse_positive(k, v); }},
        {"output_dir",
         [](auto& c, auto& k, auto& v) {
             if (v.empty())
                 throw std::invalid_argument(k + ": must not be empty");
             c.output_dir = v;
         }},
        {"zero_symbols", [](auto& c, auto& k, auto& v) { c.zero_symbols = parse_bool(k, v); }},
        {"gamma_min_db", [](auto& c, auto& k, auto& v) { c.gamma_min_db = parse_double(k, v); }},
        {"gamma_max_db", [](auto& c, auto& k, auto& v) { c.gamma_max_db = parse_double(k, v); }},
        {"gamma_step_db", [](auto& c, auto& k, auto& v) { c.gamma_step_db = parse_double(k, v); }},
        {"interference_dn", [](auto& c, auto& k, auto& v) { c.interference_dn = parse_int(k, v); }},
        {"interference_dm", [](auto& c, auto& k, auto& v) { c.interference_dm = parse_int(k, v); }},
    };
    return table;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error)
                            error = std::current_exception();
                        next = count;
                    }
                }
            });
        }
    }
    if (error)
        std::rethrow_exception(error);
}

std::ofstream open_output(const fs::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    return out;
}

fs::path prepare_dir(const ScenarioConfig& cfg)
{
    fs::path dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

std::string describe(const ScenarioConfig& cfg)
{
    std::string s = std::string(to_string(cfg.waveform)) + " " + std::string(to_string(cfg.filter)) +
                    " N=" + std::to_string(cfg.subcarriers) + " K=" + std::to_string(cfg.overlap);
    if (cfg.rolloff)
        s += " rolloff=" + fmt_num(*cfg.rolloff);
    if (cfg.waveform == Waveform::CpOfdm)
        s += " cp=" + std::to_string(cfg.cp_len) + " window=" + std::to_string(cfg.window_len);
    if (cfg.oversample > 1)
        s += " oversample=" + std::to_string(cfg.oversample);
    return s;
}

fs::path write_ccdf(const fs::path& path, const CcdfCurve& c)
{
    auto out = open_output(path);
    out << "# label: " << c.label << "\n";
    out << "gamma_db,prob,n_windows\n";
    for (std::size_t i = 0; i < c.gamma_db.size(); ++i)
        out << fmt_num(c.gamma_db[i]) << ',' << fmt_num(c.prob[i]) << ',' << c.n_samples << '\n';
    return path;
}

fs::path write_psd(const fs::path& path, const PsdCurve& c, const std::string& label)
{
    auto out = open_output(path);
    out << "# label: " << label << "\n";
    out << "freq_norm,power_db\n";
    for (std::size_t i = 0; i < c.freq.size(); ++i)
        out << fmt_num(c.freq[i]) << ',' << fmt_num(c.power_db[i]) << '\n';
    return path;
}

fs::path write_samples(const fs::path& path, const BasebandSignal& x, const std::string& label)
{
    auto out = open_output(path);
    out << "# label: " << label << "\n";
    out << "index,re,im,abs\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        out << i << ',' << fmt_num(x.samples[i].real()) << ',' << fmt_num(x.samples[i].imag()) << ','
            << fmt_num(std::abs(x.samples[i])) << '\n';
    return path;
}

fs::path write_config(const fs::path& dir, const ScenarioConfig& cfg, const std::string& command)
{
    const fs::path path = dir / (cfg.file_stem() + "_" + command + ".cfg");
    auto out = open_output(path);
    out << format_config(cfg);
    return path;
}

} // namespace

std::vector<std::string> config_keys()
{
    std::vector<std::string> keys;
    for (const auto& [k, _] : setters())
        keys.push_back(k);
    return keys;
}

void apply_setting(ScenarioConfig& cfg, const std::string& key, const std::string& value)
{
    for (const auto& [k, set] : setters()) {
        if (k == key) {
            set(cfg, key, value);
            return;
        }
    }
    throw std::invalid_argument("unknown config key '" + key + "'");
}

ScenarioConfig parse_config(std::istream& in)
{
    ScenarioConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
        apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

ScenarioConfig load_config(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot read config " + path.string());
    return parse_config(in);
}

std::string format_config(const ScenarioConfig& cfg)
{
    std::ostringstream out;
    out << "waveform = " << to_string(cfg.waveform) << '\n'
        << "filter = " << to_string(cfg.filter) << '\n'
        << "overlap = " << cfg.overlap << '\n'
        << "rolloff = " << (cfg.rolloff ? fmt_num(*cfg.rolloff) : std::string("auto")) << '\n'
        << "subcarriers = " << cfg.subcarriers << '\n'
        << "symbols_per_frame = " << cfg.symbols_per_frame << '\n'
        << "n_frames = " << cfg.n_frames << '\n'
        << "qam_order = " << cfg.qam_order << '\n'
        << "seed = " << cfg.seed << '\n'
        << "cp_len = " << cfg.cp_len << '\n'
        << "window_len = " << cfg.window_len << '\n'
        << "truncate = " << to_string(cfg.truncate) << '\n'
        << "oversample = " << cfg.oversample << '\n'
        << "output_dir = " << cfg.output_dir << '\n'
        << "zero_symbols = " << (cfg.zero_symbols ? "true" : "false") << '\n'
        << "gamma_min_db = " << fmt_num(cfg.gamma_min_db) << '\n'
        << "gamma_max_db = " << fmt_num(cfg.gamma_max_db) << '\n'
        << "gamma_step_db = " << fmt_num(cfg.gamma_step_db) << '\n'
        << "interference_dn = " << cfg.interference_dn << '\n'
        << "interference_dm = " << cfg.interference_dm << '\n';
    return out.str();
}

ScenarioConfig ScenarioConfig::resolved() const
{
    ScenarioConfig c = *this;
    if (c.waveform == Waveform::CpOfdm) {
        c.filter = FilterKind::Rect;
        c.overlap = 1;
        c.rolloff.reset();
        if (c.cp_len >= c.subcarriers)
            throw std::invalid_argument("cp_len must be smaller than subcarriers");
        if (c.window_len > c.cp_len)
            throw std::invalid_argument("window_len must not exceed cp_len");
    } else {
        if (c.filter == FilterKind::Rect && c.overlap != 1)
            throw std::invalid_argument("rect filter requires overlap = 1");
        if (c.subcarriers % 2 != 0)
            throw std::invalid_argument("subcarriers must be even for FBMC waveforms");
        if (!is_power_of_two(c.subcarriers * c.oversample))
            throw std::invalid_argument("subcarriers * oversample must be a power of two");
    }
    if (c.filter == FilterKind::Srrc) {
        if (!c.rolloff)
            c.rolloff = std::min(1.0, 2.0 / static_cast<double>(c.overlap));
        if (!(*c.rolloff > 0.0 && *c.rolloff <= 1.0))
            throw std::invalid_argument("rolloff must lie in (0, 1]");
    } else {
        c.rolloff.reset();
    }
    if (c.filter == FilterKind::Phydyas && (c.overlap < 2 || c.overlap > 4))
        throw std::invalid_argument("phydyas filter supports overlap 2, 3 or 4");
    if (c.qam_order != 4 && c.qam_order != 16 && c.qam_order != 64)
        throw std::invalid_argument("qam_order must be 4, 16 or 64");
    if (!(c.gamma_step_db > 0.0) || c.gamma_max_db < c.gamma_min_db)
        throw std::invalid_argument("gamma grid must satisfy gamma_min_db <= gamma_max_db, step > 0");
    return c;
}

std::string ScenarioConfig::file_stem() const
{
    return std::string(to_string(waveform)) + "_" + std::string(to_string(filter)) + "_N" +
           std::to_string(subcarriers) + "_K" + std::to_string(overlap);
}

PrototypeFilter ScenarioConfig::design_filter(std::size_t oversample_factor) const
{
    const std::size_t p = subcarriers * oversample_factor;
    switch (filter) {
    case FilterKind::Srrc:
        return design_srrc(p, overlap, rolloff.value_or(std::min(1.0, 2.0 / static_cast<double>(overlap))));
    case FilterKind::Phydyas:
        return design_phydyas(p, overlap);
    case FilterKind::Rect:
        return design_rect(p);
    }
    throw std::logic_error("design_filter: bad filter kind");
}

FrameSignals generate_frame(const ScenarioConfig& cfg, const PrototypeFilter& h, std::size_t index)
{
    QamGrid g = cfg.zero_symbols ? QamGrid(cfg.subcarriers, cfg.symbols_per_frame, cfg.qam_order)
                                 : random_qam_grid(cfg.subcarriers, cfg.symbols_per_frame, cfg.qam_order,
                                                   frame_seed(cfg.seed, index));
    if (cfg.waveform == Waveform::CpOfdm)
        return {cp_ofdm_modulate(g, cfg.cp_len, cfg.window_len, cfg.oversample), std::nullopt};

    const OqamGrid a = oqam_stagger(g);
    if (const auto s = structure_of(cfg.waveform)) {
        DualPolFrame dp = synthesize_dp(a, h, *s);
        return {std::move(dp.h_signal), std::move(dp.v_signal)};
    }
    return {synthesize_ppn(a, h), std::nullopt};
}

std::vector<double> PaprSamples::pooled_h() const
{
    std::vector<double> all;
    for (const auto& f : h)
        all.insert(all.end(), f.begin(), f.end());
    return all;
}

std::vector<double> PaprSamples::pooled_v() const
{
    std::vector<double> all;
    for (const auto& f : v)
        all.insert(all.end(), f.begin(), f.end());
    return all;
}

PaprSamples simulate_papr(const ScenarioConfig& config, unsigned threads)
{
    const ScenarioConfig cfg = config.resolved();
    const PrototypeFilter h = cfg.design_filter(cfg.oversample);
    const bool dual = structure_of(cfg.waveform).has_value();
    const bool truncate = cfg.truncate != TruncateMode::Off;
    const std::size_t win = cfg.subcarriers * cfg.oversample;

    PaprSamples out;
    out.h.resize(cfg.n_frames);
    if (dual)
        out.v.resize(cfg.n_frames);
    parallel_for(cfg.n_frames, threads, [&](std::size_t i) {
        FrameSignals f = generate_frame(cfg, h, i);
        out.h[i] = papr_windows(truncate ? truncate_tails(f.h) : f.h, win);
        if (dual)
            out.v[i] = papr_windows(truncate ? truncate_tails(*f.v) : *f.v, win);
    });
    return out;
}

CcdfRun run_ccdf(const ScenarioConfig& config, unsigned threads)
{
    const ScenarioConfig cfg = config.resolved();
    const fs::path dir = prepare_dir(cfg);
    const std::string stem = cfg.file_stem();
    const auto grid = gamma_grid(cfg.gamma_min_db, cfg.gamma_max_db, cfg.gamma_step_db);
    const bool dual = structure_of(cfg.waveform).has_value();

    CcdfRun run;
    run.samples = simulate_papr(cfg, threads);
    const std::string label = describe(cfg);
    run.empirical = empirical_ccdf(run.samples.pooled_h(), grid, label + (dual ? " H empirical" : " empirical"));
    run.files.push_back(write_ccdf(dir / (stem + "_ccdf.csv"), run.empirical));
    if (dual)
        run.files.push_back(write_ccdf(dir / (stem + "_ccdf_v.csv"),
                                       empirical_ccdf(run.samples.pooled_v(), grid, label + " V empirical")));

    if (cfg.waveform != Waveform::CpOfdm) {
        const PrototypeFilter h = cfg.design_filter(1);
        if (!dual) {
            run.analytic.push_back(analytic_alpha(h, cfg.subcarriers, ParityMask::All));
            run.files.push_back(write_ccdf(dir / (stem + "_ccdf_analytic.csv"),
                                           analytic_ccdf(run.analytic.back(), grid, label + " analytic")));
        } else {
            run.analytic.push_back(analytic_alpha(h, cfg.subcarriers, ParityMask::All));
            run.files.push_back(write_ccdf(dir / (stem + "_ccdf_analytic_all.csv"),
                                           analytic_ccdf(run.analytic.back(), grid, label + " analytic all-m")));
            if (cfg.waveform == Waveform::DpS1) {
                run.analytic.push_back(analytic_alpha(h, cfg.subcarriers, ParityMask::EvenOnly));
                run.files.push_back(write_ccdf(dir / (stem + "_ccdf_analytic_even.csv"),
                                               analytic_ccdf(run.analytic.back(), grid, label + " analytic even-m")));
            }
        }
    }
    run.files.push_back(write_config(dir, cfg, "ccdf"));
    return run;
}

PsdRun run_psd(const ScenarioConfig& config, unsigned threads)
{
    const ScenarioConfig cfg = config.resolved();
    const fs::path dir = prepare_dir(cfg);
    const std::string stem = cfg.file_stem();
    const PrototypeFilter h = cfg.design_filter(cfg.oversample);
    const std::size_t p = cfg.subcarriers * cfg.oversample;
    const std::size_t segment = 4 * p;
    const std::size_t nfft = 8 * p;

    const bool want_full = cfg.truncate != TruncateMode::On;
    const bool want_trunc = cfg.truncate != TruncateMode::Off;
    std::vector<std::vector<double>> full(cfg.n_frames);
    std::vector<std::vector<double>> trunc(cfg.n_frames);
    parallel_for(cfg.n_frames, threads, [&](std::size_t i) {
        const BasebandSignal x = center_band(generate_frame(cfg, h, i).h);
        if (want_full)
            full[i] = welch_power(x.samples, nfft, segment, segment / 2);
        if (want_trunc)
            trunc[i] = welch_power(truncate_tails(x).samples, nfft, segment, segment / 2);
    });

    PsdRun run;
    const std::string label = describe(cfg);
    auto average = [&](const std::vector<std::vector<double>>& rows) {
        auto sum = pairwise_sum_rows(rows);
        for (double& s : sum)
            s /= static_cast<double>(rows.size());
        return sum;
    };
    if (want_full) {
        run.full = normalize_psd(average(full), false);
        run.files.push_back(write_psd(dir / (stem + "_psd.csv"), *run.full, label + " with tails"));
    }
    if (want_trunc) {
        run.truncated = normalize_psd(average(trunc), true);
        run.files.push_back(write_psd(dir / (stem + "_psd_truncated.csv"), *run.truncated, label + " without tails"));
    }
    run.files.push_back(write_config(dir, cfg, "psd"));
    return run;
}

FileRun run_frame(const ScenarioConfig& config)
{
    const ScenarioConfig cfg = config.resolved();
    const fs::path dir = prepare_dir(cfg);
    const std::string stem = cfg.file_stem();
    const PrototypeFilter h = cfg.design_filter(cfg.oversample);
    FrameSignals f = generate_frame(cfg, h, 0);
    const bool truncate = cfg.truncate != TruncateMode::Off;
    const std::string label = describe(cfg) + (truncate ? " without tails" : " with tails");

    FileRun run;
    if (f.v) {
        run.files.push_back(write_samples(dir / (stem + "_frame_h.csv"), truncate ? truncate_tails(f.h) : f.h, label + " H"));
        run.files.push_back(write_samples(dir / (stem + "_frame_v.csv"), truncate ? truncate_tails(*f.v) : *f.v, label + " V"));
    } else {
        run.files.push_back(write_samples(dir / (stem + "_frame.csv"), truncate ? truncate_tails(f.h) : f.h, label));
    }
    run.files.push_back(write_config(dir, cfg, "frame"));
    return run;
}

FileRun run_filters(const ScenarioConfig& config)
{
    const ScenarioConfig cfg = config.resolved();
    const fs::path dir = prepare_dir(cfg);
    const PrototypeFilter h = cfg.design_filter(cfg.oversample);

    FileRun run;
    const fs::path path = dir / (cfg.file_stem() + "_taps.csv");
    auto out = open_output(path);
    out << "# label: " << describe(cfg) << " taps\n";
    out << "index,value\n";
    for (std::size_t i = 0; i < h.length(); ++i)
        out << i << ',' << fmt_num(h.coeffs[i]) << '\n';
    out.close();
    run.files.push_back(path);
    run.files.push_back(write_config(dir, cfg, "filters"));
    return run;
}

FileRun run_interference(const ScenarioConfig& config)
{
    const ScenarioConfig cfg = config.resolved();
    const fs::path dir = prepare_dir(cfg);
    const PrototypeFilter h = cfg.design_filter(1);
    const InterferenceTable t = intrinsic_interference(h, cfg.waveform, {cfg.interference_dn, cfg.interference_dm});

    FileRun run;
    const fs::path path = dir / (cfg.file_stem() + "_interference.csv");
    auto out = open_output(path);
    out << "# label: " << describe(cfg) << " single-pilot interference\n";
    out << "# pilot_real: " << fmt_num(t.pilot_real) << " pilot_imag: " << fmt_num(t.pilot_imag)
        << " interference_power: " << fmt_num(t.interference_power()) << "\n";
    out << "dn,dm,magnitude\n";
    for (const auto& e : t.entries)
        out << e.dn << ',' << e.dm << ',' << fmt_num(e.magnitude) << '\n';
    out.close();
    run.files.push_back(path);
    run.files.push_back(write_config(dir, cfg, "interference"));
    return run;
}

} // namespace dpfbmc
