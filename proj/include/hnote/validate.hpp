#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hnote/score.hpp"
#include "hnote/token.hpp"

namespace hnote {

struct TokenRef {
    int line = 0;
    TokenCode code = 0;

    bool operator==(const TokenRef&) const = default;
};

enum class ErrorCategory {
    InvalidToken,
    IncompleteMeasure,
    OrphanContinuation,
    EmptyLine,
};

const char* to_string(ErrorCategory cat);

struct SourcePos {
    int line = 0;
    int measure = 0;
    int unit = 0;            // unit index within the measure
    bool at_end = false;     // error detected at end of the line's stream

    bool operator==(const SourcePos&) const = default;
};

struct ValidationError {
    SourcePos pos;
    ErrorCategory category;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationError> errors;

    bool valid() const { return errors.empty(); }
    bool has(ErrorCategory cat) const;
};

struct TokenizeResult {
    std::vector<TokenRef> tokens;
    std::vector<ValidationError> errors;  // InvalidToken entries
    int line_count = 0;                   // non-blank text lines seen

    bool ok() const { return errors.empty(); }
};

// Reads both the canonical format (hex pairs, measures split by "|") and
// the quoted style ("3C", "BC", ...). Delimiters are consumed, not
// emitted. Whitespace-only lines are separators; a non-blank line that
// yields no tokens still counts toward line_count (reported EmptyLine by
// the validator).
TokenizeResult tokenize(std::string_view text);

// Structural checks over a token stream: bar alignment, continuation
// adjacency, onset at line start, non-empty lines. Collects every error.
ValidationReport validate(const TokenizeResult& input);

// tokenize + validate in one pass over a document.
ValidationReport validate_text(std::string_view text);

// Groups validated tokens into a Score. Throws std::invalid_argument if
// the stream does not validate.
Score build_score(const TokenizeResult& input);

// tokenize + validate + build. Throws std::invalid_argument on failure.
Score parse_score(std::string_view text);

}  // namespace hnote
