#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "hnote/token.hpp"

namespace hnote {

struct Measure {
    std::array<TokenCode, kUnitsPerMeasure> units{};

    bool operator==(const Measure&) const = default;
};

// Lines of fixed 32-unit measures; the canonical in-memory piece.
struct Score {
    std::vector<std::vector<Measure>> lines;

    std::size_t total_units() const;
    bool operator==(const Score&) const = default;
};

struct NoteStart {
    int line = 0;
    int measure = 0;
    int unit = 0;  // offset within the measure, [0, 31]

    bool operator==(const NoteStart&) const = default;
};

// Assembled note event: one onset plus its contiguous continuations.
// Continuations may cross measure boundaries (ties) but never lines.
struct Note {
    int pitch = 0;  // 0 = rest
    int duration_units = 1;
    NoteStart start;

    bool is_rest() const { return pitch == 0; }
    bool operator==(const Note&) const = default;
};

struct DurationOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Maximal [onset, continuation...] runs in reading order. Rests included.
std::vector<Note> assemble_notes(const Score& score);

// Inverse of assemble_notes. Only pitch, duration_units and start.line of
// each note are consulted; notes must be grouped by line in order.
// Throws DurationOverflow when a line's units do not fill whole measures.
Score emit_tokens(const std::vector<Note>& notes);

// Canonical text: uppercase hex, single spaces, " | " between measures,
// one line per text line, trailing newline.
std::string serialize(const Score& score);

}  // namespace hnote
