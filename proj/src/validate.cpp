#include "hnote/validate.hpp"

#include <algorithm>
#include <sstream>

namespace hnote {

const char* to_string(ErrorCategory cat) {
    switch (cat) {
        case ErrorCategory::InvalidToken: return "InvalidToken";
        case ErrorCategory::IncompleteMeasure: return "IncompleteMeasure";
        case ErrorCategory::OrphanContinuation: return "OrphanContinuation";
        case ErrorCategory::EmptyLine: return "EmptyLine";
    }
    return "?";
}

bool ValidationReport::has(ErrorCategory cat) const {
    return std::any_of(errors.begin(), errors.end(),
                       [cat](const ValidationError& e) { return e.category == cat; });
}

namespace {

bool blank(std::string_view s) {
    return s.find_first_not_of(" \t\r") == std::string_view::npos;
}

// Strips quotes and commas a tolerant reader has to swallow.
std::string_view strip_punct(std::string_view lex) {
    while (!lex.empty() && (lex.front() == '"' || lex.front() == ',' || lex.front() == '\''))
        lex.remove_prefix(1);
    while (!lex.empty() && (lex.back() == '"' || lex.back() == ',' || lex.back() == '\''))
        lex.remove_suffix(1);
    return lex;
}

SourcePos unit_pos(int line, int unit_index) {
    return {line, unit_index / kUnitsPerMeasure, unit_index % kUnitsPerMeasure, false};
}

}  // namespace

TokenizeResult tokenize(std::string_view text) {
    TokenizeResult result;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        std::string_view raw = text.substr(
            start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        if (nl == std::string_view::npos && raw.empty()) break;
        if (!blank(raw)) {
            int line = result.line_count++;
            int units_in_line = 0;
            std::size_t i = 0;
            while (i < raw.size()) {
                while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r')) ++i;
                std::size_t j = i;
                while (j < raw.size() && raw[j] != ' ' && raw[j] != '\t' && raw[j] != '\r') ++j;
                if (j > i) {
                    std::string_view lex = strip_punct(raw.substr(i, j - i));
                    if (!lex.empty() && lex != "|") {
                        auto code = parse_hex(std::string(lex));
                        if (code) {
                            result.tokens.push_back({line, *code});
                            ++units_in_line;
                        } else {
                            result.errors.push_back(
                                {unit_pos(line, units_in_line), ErrorCategory::InvalidToken,
                                 "not a two-hex-digit token: '" + std::string(lex) + "'"});
                        }
                    }
                }
                i = j;
            }
        }
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return result;
}

ValidationReport validate(const TokenizeResult& input) {
    ValidationReport report;
    report.errors = input.errors;

    std::vector<std::vector<TokenCode>> lines(input.line_count);
    for (const TokenRef& t : input.tokens) lines[t.line].push_back(t.code);

    for (int li = 0; li < input.line_count; ++li) {
        const auto& units = lines[li];
        if (units.empty()) {
            report.errors.push_back(
                {{li, 0, 0, false}, ErrorCategory::EmptyLine, "line has no tokens"});
            continue;
        }
        for (std::size_t i = 0; i < units.size(); ++i) {
            TokenCode c = units[i];
            if (!is_continuation(c)) continue;
            TokenCode onset = continuation_of(c);
            bool legal = i > 0 && (units[i - 1] == onset || units[i - 1] == c);
            if (!legal) {
                std::string what = i == 0 ? "line starts with continuation " + to_hex(c)
                                          : "continuation " + to_hex(c) +
                                                " does not extend preceding unit " +
                                                to_hex(units[i - 1]);
                report.errors.push_back({unit_pos(li, static_cast<int>(i)),
                                         ErrorCategory::OrphanContinuation, what});
            }
        }
        if (units.size() % kUnitsPerMeasure != 0) {
            SourcePos pos = unit_pos(li, static_cast<int>(units.size()));
            pos.at_end = true;
            report.errors.push_back(
                {pos, ErrorCategory::IncompleteMeasure,
                 "line has " + std::to_string(units.size()) +
                     " units, not a multiple of " + std::to_string(kUnitsPerMeasure)});
        }
    }

    std::stable_sort(report.errors.begin(), report.errors.end(),
                     [](const ValidationError& a, const ValidationError& b) {
                         if (a.pos.line != b.pos.line) return a.pos.line < b.pos.line;
                         if (a.pos.at_end != b.pos.at_end) return !a.pos.at_end;
                         if (a.pos.measure != b.pos.measure) return a.pos.measure < b.pos.measure;
                         return a.pos.unit < b.pos.unit;
                     });
    return report;
}

ValidationReport validate_text(std::string_view text) {
    return validate(tokenize(text));
}

Score build_score(const TokenizeResult& input) {
    ValidationReport report = validate(input);
    if (!report.valid()) {
        std::ostringstream msg;
        msg << "token stream does not validate:";
        for (const auto& e : report.errors)
            msg << " [" << to_string(e.category) << " L" << e.pos.line << "] " << e.message << ";";
        throw std::invalid_argument(msg.str());
    }
    Score score;
    score.lines.resize(input.line_count);
    std::vector<int> fill(input.line_count, 0);
    for (const TokenRef& t : input.tokens) {
        int& n = fill[t.line];
        if (n % kUnitsPerMeasure == 0) score.lines[t.line].emplace_back();
        score.lines[t.line].back().units[n % kUnitsPerMeasure] = t.code;
        ++n;
    }
    return score;
}

Score parse_score(std::string_view text) {
    return build_score(tokenize(text));
}

}  // namespace hnote
