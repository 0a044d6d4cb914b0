#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace hnote {

// One HNote unit. 0x00-0x7F is a pitch onset (0x00 = rest),
// 0x80-0xFF continues the onset (code - 0x80) for one more unit.
using TokenCode = std::uint8_t;

constexpr TokenCode kRest = 0x00;
constexpr int kUnitsPerMeasure = 32;

// Integer unit counts per note value at 32 units / 4-4 measure.
constexpr int kWholeUnits = 32;
constexpr int kDottedHalfUnits = 24;
constexpr int kHalfUnits = 16;
constexpr int kQuarterUnits = 8;
constexpr int kEighthUnits = 4;
constexpr int kSixteenthUnits = 2;
constexpr int kThirtySecondUnits = 1;

constexpr bool is_onset(TokenCode c) { return c < 0x80; }
constexpr bool is_continuation(TokenCode c) { return c >= 0x80; }

// Pitch index a continuation extends. Only meaningful for codes >= 0x80.
constexpr TokenCode continuation_of(TokenCode c) {
    return static_cast<TokenCode>(c - 0x80);
}

constexpr TokenCode continuation_for(TokenCode onset) {
    return static_cast<TokenCode>(onset + 0x80);
}

// Two uppercase hex digits, e.g. 0x3C -> "3C".
std::string to_hex(TokenCode code);

// Accepts exactly two hex digits (either case).
std::optional<TokenCode> parse_hex(const std::string& text);

// Scientific pitch name on the C-1 = 0 semitone ladder: 0x3C -> "C4".
// Throws std::out_of_range for code > 0x7F.
std::string pitch_name(int code);

}  // namespace hnote
