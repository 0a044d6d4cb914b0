#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hnote/score.hpp"

namespace hnote {

struct MidiError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExportConfig {
    int ppq = 480;                        // must be divisible by 8
    std::uint32_t tempo_us_per_beat = 1000000;  // 60 BPM
    int channel = 0;
    int velocity = 90;
    int program = 0;
};

// Format-0 SMF: tempo meta, one Note-On/Note-Off pair per sounding note
// at full duration, rests silent, lines concatenated. One HNote unit is
// ppq/8 ticks. Deterministic byte-for-byte.
std::vector<std::uint8_t> export_midi(const Score& score,
                                      const ExportConfig& config = {});

}  // namespace hnote
