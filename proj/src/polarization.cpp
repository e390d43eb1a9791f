#include "dpfbmc/polarization.hpp"

#include <stdexcept>
#include <string>

namespace dpfbmc {

std::string_view to_string(Structure s)
{
    switch (s) {
    case Structure::S1Tpdm:
        return "s1";
    case Structure::S2Fpdm:
        return "s2";
    case Structure::S3Tfpdm:
        return "s3";
    }
    return "unknown";
}

std::string_view to_string(Waveform w)
{
    switch (w) {
    case Waveform::CpOfdm:
        return "cp_ofdm";
    case Waveform::Fbmc:
        return "fbmc";
    case Waveform::DpS1:
        return "dp_s1";
    case Waveform::DpS2:
        return "dp_s2";
    case Waveform::DpS3:
        return "dp_s3";
    }
    return "unknown";
}

Waveform parse_waveform(std::string_view name)
{
    for (auto w : {Waveform::CpOfdm, Waveform::Fbmc, Waveform::DpS1, Waveform::DpS2, Waveform::DpS3})
        if (to_string(w) == name)
            return w;
    throw std::invalid_argument("unknown waveform '" + std::string(name) + "'");
}

std::optional<Structure> structure_of(Waveform w)
{
    switch (w) {
    case Waveform::DpS1:
        return Structure::S1Tpdm;
    case Waveform::DpS2:
        return Structure::S2Fpdm;
    case Waveform::DpS3:
        return Structure::S3Tfpdm;
    default:
        return std::nullopt;
    }
}

bool on_h_branch(Structure s, std::size_t n, std::size_t m)
{
    switch (s) {
    case Structure::S1Tpdm:
        return m % 2 == 0;
    case Structure::S2Fpdm:
        return n % 2 == 0;
    case Structure::S3Tfpdm:
        return (n + m) % 2 == 0;
    }
    throw std::logic_error("on_h_branch: bad structure");
}

std::pair<OqamGrid, OqamGrid> multiplex(const OqamGrid& a, Structure s)
{
    if (s == Structure::S1Tpdm && a.symbols % 2 != 0)
        throw std::invalid_argument("multiplex: structure I needs an even symbol count");
    OqamGrid h(a.subcarriers, a.symbols);
    OqamGrid v(a.subcarriers, a.symbols);
    for (std::size_t n = 0; n < a.subcarriers; ++n)
        for (std::size_t m = 0; m < a.symbols; ++m)
            (on_h_branch(s, n, m) ? h : v).at(n, m) = a.at(n, m);
    return {std::move(h), std::move(v)};
}

std::pair<OqamGrid, OqamGrid> multiplex_structure1(const OqamGrid& a)
{
    return multiplex(a, Structure::S1Tpdm);
}

std::pair<OqamGrid, OqamGrid> multiplex_structure2(const OqamGrid& a)
{
    return multiplex(a, Structure::S2Fpdm);
}

std::pair<OqamGrid, OqamGrid> multiplex_structure3(const OqamGrid& a)
{
    return multiplex(a, Structure::S3Tfpdm);
}

DualPolFrame synthesize_dp(const OqamGrid& a, const PrototypeFilter& h, Structure s)
{
    auto [gh, gv] = multiplex(a, s);
    return {synthesize_ppn(gh, h), synthesize_ppn(gv, h), s};
}

} // namespace dpfbmc
