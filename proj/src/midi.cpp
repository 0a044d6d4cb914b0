#include "hnote/midi.hpp"

#include <cstddef>

namespace hnote {

namespace {

void push_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void push_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

// Variable-length quantity, MSB-first, 7 bits per byte.
void push_vlq(std::vector<std::uint8_t>& out, std::uint32_t v) {
    std::uint8_t bytes[5];
    int n = 0;
    do {
        bytes[n++] = static_cast<std::uint8_t>(v & 0x7F);
        v >>= 7;
    } while (v != 0);
    for (int i = n - 1; i > 0; --i) out.push_back(bytes[i] | 0x80);
    out.push_back(bytes[0]);
}

}  // namespace

std::vector<std::uint8_t> export_midi(const Score& score, const ExportConfig& config) {
    if (config.ppq <= 0 || config.ppq % 8 != 0)
        throw MidiError("ppq must be a positive multiple of 8, got " +
                        std::to_string(config.ppq));
    if (config.channel < 0 || config.channel > 15) throw MidiError("bad channel");
    if (config.velocity < 1 || config.velocity > 127) throw MidiError("bad velocity");
    if (config.program < 0 || config.program > 127) throw MidiError("bad program");

    std::vector<Note> notes;
    try {
        notes = assemble_notes(score);
    } catch (const std::exception& e) {
        throw MidiError(std::string("invalid score: ") + e.what());
    }

    const std::uint32_t ticks_per_unit = static_cast<std::uint32_t>(config.ppq / 8);
    const std::uint8_t channel = static_cast<std::uint8_t>(config.channel);

    // absolute start tick per line: lines play back to back
    std::vector<std::uint32_t> line_start;
    std::uint32_t t = 0;
    for (const auto& line : score.lines) {
        line_start.push_back(t);
        t += static_cast<std::uint32_t>(line.size()) * kUnitsPerMeasure * ticks_per_unit;
    }
    const std::uint32_t total_ticks = t;

    std::vector<std::uint8_t> track;
    // tempo meta
    push_vlq(track, 0);
    track.push_back(0xFF);
    track.push_back(0x51);
    track.push_back(0x03);
    track.push_back(static_cast<std::uint8_t>(config.tempo_us_per_beat >> 16));
    track.push_back(static_cast<std::uint8_t>((config.tempo_us_per_beat >> 8) & 0xFF));
    track.push_back(static_cast<std::uint8_t>(config.tempo_us_per_beat & 0xFF));
    if (config.program != 0) {
        push_vlq(track, 0);
        track.push_back(static_cast<std::uint8_t>(0xC0 | channel));
        track.push_back(static_cast<std::uint8_t>(config.program));
    }

    std::uint32_t cursor = 0;
    auto emit_at = [&track, &cursor](std::uint32_t tick) {
        push_vlq(track, tick - cursor);
        cursor = tick;
    };

    for (const Note& note : notes) {
        if (note.is_rest()) continue;
        std::uint32_t on = line_start[note.start.line] +
                           (static_cast<std::uint32_t>(note.start.measure) * kUnitsPerMeasure +
                            note.start.unit) *
                               ticks_per_unit;
        std::uint32_t off = on + static_cast<std::uint32_t>(note.duration_units) * ticks_per_unit;
        // monophonic input: notes are already in nondecreasing tick order
        emit_at(on);
        track.push_back(static_cast<std::uint8_t>(0x90 | channel));
        track.push_back(static_cast<std::uint8_t>(note.pitch));
        track.push_back(static_cast<std::uint8_t>(config.velocity));
        emit_at(off);
        track.push_back(static_cast<std::uint8_t>(0x80 | channel));
        track.push_back(static_cast<std::uint8_t>(note.pitch));
        track.push_back(0x00);
    }

    // end of track closes out trailing rests
    emit_at(total_ticks);
    track.push_back(0xFF);
    track.push_back(0x2F);
    track.push_back(0x00);

    std::vector<std::uint8_t> file;
    file.reserve(14 + 8 + track.size());
    file.insert(file.end(), {'M', 'T', 'h', 'd'});
    push_u32(file, 6);
    push_u16(file, 0);  // format 0
    push_u16(file, 1);  // one track
    push_u16(file, static_cast<std::uint16_t>(config.ppq));
    file.insert(file.end(), {'M', 'T', 'r', 'k'});
    push_u32(file, static_cast<std::uint32_t>(track.size()));
    file.insert(file.end(), track.begin(), track.end());
    return file;
}

}  // namespace hnote
