// dpfbmc: multicarrier waveform campaigns (filters, frame, ccdf, psd, interference).

#include "dpfbmc/campaign.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <map>
#include <thread>

namespace {

struct Overrides {
    std::string config_path;
    std::map<std::string, std::string> values;
    bool zero_symbols = false;
};

void add_scenario_options(CLI::App* sub, Overrides& ov)
{
    sub->add_option("-c,--config", ov.config_path, "key=value scenario file")->check(CLI::ExistingFile);
    for (const auto& key : dpfbmc::config_keys()) {
        if (key == "zero_symbols")
            continue;
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        sub->add_option(flag, ov.values[key], "scenario field '" + key + "'");
    }
    sub->add_flag("--zero-symbols", ov.zero_symbols, "transmit an all-zero grid (debugging)");
}

dpfbmc::ScenarioConfig build_config(CLI::App* sub, const Overrides& ov)
{
    dpfbmc::ScenarioConfig cfg = ov.config_path.empty() ? dpfbmc::ScenarioConfig{}
                                                        : dpfbmc::load_config(ov.config_path);
    for (const auto& [key, value] : ov.values) {
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        if (sub->count(flag) > 0)
            dpfbmc::apply_setting(cfg, key, value);
    }
    if (ov.zero_symbols)
        cfg.zero_symbols = true;
    return cfg.resolved();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multicarrier waveform laboratory: CP-OFDM, FBMC and dual-polarization FBMC"};
    app.require_subcommand(1);

    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("-j,--threads", threads, "worker threads (results do not depend on this)")
        ->check(CLI::PositiveNumber);

    const std::pair<const char*, const char*> commands[] = {
        {"filters", "write prototype filter taps (index,value)"},
        {"frame", "write one frame's samples (index,re,im,abs)"},
        {"ccdf", "empirical and analytic PAPR CCDF (gamma_db,prob,n_windows)"},
        {"psd", "averaged periodogram PSD (freq_norm,power_db)"},
        {"interference", "single-pilot intrinsic interference table (dn,dm,magnitude)"},
    };
    std::map<std::string, Overrides> overrides;
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, help] : commands) {
        subs[name] = app.add_subcommand(name, help);
        add_scenario_options(subs[name], overrides[name]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "dpfbmc: " << e.what() << " (see --help)\n";
        return 2;
    }

    for (const auto& [name, sub] : subs) {
        if (!sub->parsed())
            continue;
        dpfbmc::ScenarioConfig cfg;
        try {
            cfg = build_config(sub, overrides[name]);
        } catch (const std::invalid_argument& e) {
            std::cerr << "dpfbmc: config error: " << e.what() << '\n';
            return 2;
        }
        try {
            std::vector<std::filesystem::path> files;
            if (name == "filters")
                files = dpfbmc::run_filters(cfg).files;
            else if (name == "frame")
                files = dpfbmc::run_frame(cfg).files;
            else if (name == "ccdf")
                files = dpfbmc::run_ccdf(cfg, threads).files;
            else if (name == "psd")
                files = dpfbmc::run_psd(cfg, threads).files;
            else
                files = dpfbmc::run_interference(cfg).files;
            for (const auto& f : files)
                std::cout << f.string() << '\n';
        } catch (const std::exception& e) {
            std::cerr << "dpfbmc: " << e.what() << '\n';
            return 1;
        }
    }
    return 0;
}
