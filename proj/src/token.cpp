#include "hnote/token.hpp"

#include <cctype>
#include <stdexcept>

namespace hnote {

namespace {
constexpr char kHexDigits[] = "0123456789ABCDEF";

const char* const kPitchClasses[12] = {"C",  "C#", "D",  "D#", "E",  "F",
                                       "F#", "G",  "G#", "A",  "A#", "B"};

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}
}  // namespace

std::string to_hex(TokenCode code) {
    std::string out(2, '0');
    out[0] = kHexDigits[code >> 4];
    out[1] = kHexDigits[code & 0x0F];
    return out;
}

std::optional<TokenCode> parse_hex(const std::string& text) {
    if (text.size() != 2) return std::nullopt;
    int hi = hex_value(text[0]);
    int lo = hex_value(text[1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    return static_cast<TokenCode>(hi * 16 + lo);
}

std::string pitch_name(int code) {
    if (code < 0 || code > 0x7F)
        throw std::out_of_range("pitch code out of range: " + std::to_string(code));
    int octave = code / 12 - 1;  // C-1 = 0
    return std::string(kPitchClasses[code % 12]) + std::to_string(octave);
}

}  // namespace hnote
