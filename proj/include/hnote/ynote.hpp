#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hnote/score.hpp"
#include "hnote/token.hpp"

namespace hnote {

struct ConvertError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Four-character YNote token: two-hex-digit pitch index + duration code.
struct YNoteToken {
    TokenCode pitch = 0;      // onset index, 0x00 = rest
    std::string duration;     // two-character code, resolved via DurationTable

    bool operator==(const YNoteToken&) const = default;
};

struct YNoteRef {
    int line = 0;
    YNoteToken token;

    bool operator==(const YNoteRef&) const = default;
};

// Injective code -> unit-count mapping. Injectivity (no two codes for one
// unit count) is what makes the HNote -> YNote direction well defined.
class DurationTable {
public:
    // Anchored at "02" -> 16; beat codes 01-04, sub-beat/dotted 05-09.
    static DurationTable defaults();

    // Plain text, one "CODE=UNITS" per line; '#' starts a comment.
    static DurationTable parse(std::string_view text);
    static DurationTable load_file(const std::string& path);

    void insert(const std::string& code, int units);
    const std::map<std::string, int>& entries() const { return code_to_units_; }

    int units_for(const std::string& code) const;  // throws ConvertError
    bool has_code(const std::string& code) const;
    // Duration codes by unit count, longest first (greedy decomposition order).
    const std::vector<std::pair<int, std::string>>& by_units_desc() const {
        return by_units_desc_;
    }

private:
    std::map<std::string, int> code_to_units_;
    std::vector<std::pair<int, std::string>> by_units_desc_;
};

// Splits each text line into 4-character tokens (whitespace between tokens
// tolerated) and checks both fields. Throws ConvertError with position on
// malformed tokens or codes absent from the table.
std::vector<YNoteRef> parse_ynote(std::string_view text, const DurationTable& table);

// Each (pitch, units) token becomes onset + (units-1) continuations.
// With merge_ties, consecutive same-pitch tokens fuse into one note
// (one-way: breaks token-level round trip). Throws ConvertError when a
// line's units do not fill whole measures.
Score ynote_to_hnote(const std::vector<YNoteRef>& tokens, const DurationTable& table,
                     bool merge_ties = false);

// Inverse direction. Durations missing from the table are decomposed
// greedily, longest code first; throws ConvertError when that fails.
std::vector<YNoteRef> hnote_to_ynote(const Score& score, const DurationTable& table);

// Text form: 4-character tokens, space-separated, one musical line per
// text line, trailing newline.
std::string render_ynote(const std::vector<YNoteRef>& tokens);

}  // namespace hnote
