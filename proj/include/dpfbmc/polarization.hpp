#pragma once

#include "dpfbmc/modem.hpp"

#include <optional>
#include <string_view>
#include <utility>

namespace dpfbmc {

// Dual-polarization multiplexing structures.
//   S1: time (TPDM), H carries even m
//   S2: frequency (FPDM), H carries even n
//   S3: time-frequency (TFPDM), H carries even n + m
enum class Structure { S1Tpdm, S2Fpdm, S3Tfpdm };

enum class Waveform { CpOfdm, Fbmc, DpS1, DpS2, DpS3 };

std::string_view to_string(Structure s);
std::string_view to_string(Waveform w);
Waveform parse_waveform(std::string_view name);
// Multiplexing structure of a dual-polarization waveform, nullopt otherwise.
std::optional<Structure> structure_of(Waveform w);

// True when position (n, m) is carried by the H polarization.
bool on_h_branch(Structure s, std::size_t n, std::size_t m);

std::pair<OqamGrid, OqamGrid> multiplex(const OqamGrid& a, Structure s);
std::pair<OqamGrid, OqamGrid> multiplex_structure1(const OqamGrid& a);
std::pair<OqamGrid, OqamGrid> multiplex_structure2(const OqamGrid& a);
std::pair<OqamGrid, OqamGrid> multiplex_structure3(const OqamGrid& a);

struct DualPolFrame {
    BasebandSignal h_signal;
    BasebandSignal v_signal;
    Structure structure = Structure::S1Tpdm;
};

// Both branches keep the lattice phase of their original (n, m) positions.
DualPolFrame synthesize_dp(const OqamGrid& a, const PrototypeFilter& h, Structure s);

} // namespace dpfbmc
