#include "hnote/ynote.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace hnote {

DurationTable DurationTable::defaults() {
    DurationTable t;
    // 01-04 are beat counts at 8 units per beat; 05-09 cover sub-beat
    // and dotted values. Only "02" -> 16 is fixed by the format.
    t.insert("01", 8);
    t.insert("02", 16);
    t.insert("03", 24);
    t.insert("04", 32);
    t.insert("05", 4);
    t.insert("06", 2);
    t.insert("07", 1);
    t.insert("08", 12);
    t.insert("09", 6);
    return t;
}

void DurationTable::insert(const std::string& code, int units) {
    if (code.size() != 2)
        throw ConvertError("duration code must be two characters: '" + code + "'");
    if (units < 1 || units > kUnitsPerMeasure)
        throw ConvertError("duration units out of range for code '" + code +
                           "': " + std::to_string(units));
    for (const auto& [c, u] : code_to_units_)
        if (u == units && c != code)
            throw ConvertError("duration table not injective: codes '" + c + "' and '" +
                               code + "' both map to " + std::to_string(units));
    code_to_units_[code] = units;
    by_units_desc_.clear();
    for (const auto& [c, u] : code_to_units_) by_units_desc_.emplace_back(u, c);
    std::sort(by_units_desc_.begin(), by_units_desc_.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
}

DurationTable DurationTable::parse(std::string_view text) {
    DurationTable t;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConvertError("duration table line " + std::to_string(lineno) +
                               ": expected CODE=UNITS");
        std::string code = line.substr(0, eq);
        int units = 0;
        try {
            units = std::stoi(line.substr(eq + 1));
        } catch (const std::exception&) {
            throw ConvertError("duration table line " + std::to_string(lineno) +
                               ": bad unit count");
        }
        t.insert(code, units);
    }
    if (t.entries().empty()) throw ConvertError("duration table is empty");
    return t;
}

DurationTable DurationTable::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConvertError("cannot open duration table: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

int DurationTable::units_for(const std::string& code) const {
    auto it = code_to_units_.find(code);
    if (it == code_to_units_.end())
        throw ConvertError("unknown duration code '" + code + "'");
    return it->second;
}

bool DurationTable::has_code(const std::string& code) const {
    return code_to_units_.count(code) > 0;
}

std::vector<YNoteRef> parse_ynote(std::string_view text, const DurationTable& table) {
    std::vector<YNoteRef> out;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = -1;
    int textline = 0;
    while (std::getline(in, raw)) {
        ++textline;
        if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++line;
        std::string run;
        std::istringstream words(raw);
        std::string word;
        while (words >> word) run += word;
        if (run.size() % 4 != 0)
            throw ConvertError("line " + std::to_string(textline) + ": length " +
                               std::to_string(run.size()) +
                               " is not a multiple of 4 characters");
        for (std::size_t i = 0; i < run.size(); i += 4) {
            std::string pitch_field = run.substr(i, 2);
            std::string duration_field = run.substr(i + 2, 2);
            auto pitch = parse_hex(pitch_field);
            if (!pitch || *pitch > 0x7F)
                throw ConvertError("line " + std::to_string(textline) + " token " +
                                   std::to_string(i / 4) + ": malformed pitch field '" +
                                   pitch_field + "'");
            if (!table.has_code(duration_field))
                throw ConvertError("line " + std::to_string(textline) + " token " +
                                   std::to_string(i / 4) + ": unknown duration code '" +
                                   duration_field + "'");
            out.push_back({line, {*pitch, duration_field}});
        }
    }
    return out;
}

Score ynote_to_hnote(const std::vector<YNoteRef>& tokens, const DurationTable& table,
                     bool merge_ties) {
    std::vector<Note> notes;
    int prev_line = -1;
    for (const YNoteRef& ref : tokens) {
        int units = table.units_for(ref.token.duration);
        if (merge_ties && !notes.empty() && ref.line == prev_line &&
            notes.back().pitch == ref.token.pitch) {
            notes.back().duration_units += units;
        } else {
            notes.push_back({ref.token.pitch, units, {ref.line, 0, 0}});
        }
        prev_line = ref.line;
    }
    try {
        return emit_tokens(notes);
    } catch (const DurationOverflow& e) {
        throw ConvertError(e.what());
    }
}

std::vector<YNoteRef> hnote_to_ynote(const Score& score, const DurationTable& table) {
    std::vector<YNoteRef> out;
    for (const Note& note : assemble_notes(score)) {
        int remaining = note.duration_units;
        while (remaining > 0) {
            // longest code not exceeding what is left
            const std::string* pick = nullptr;
            for (const auto& [units, code] : table.by_units_desc()) {
                if (units <= remaining) {
                    pick = &code;
                    remaining -= units;
                    break;
                }
            }
            if (pick == nullptr)
                throw ConvertError("duration " + std::to_string(note.duration_units) +
                                   " units not representable with the active table");
            out.push_back({note.start.line,
                           {static_cast<TokenCode>(note.pitch), *pick}});
        }
    }
    return out;
}

std::string render_ynote(const std::vector<YNoteRef>& tokens) {
    std::ostringstream outs;
    int prev_line = tokens.empty() ? 0 : tokens.front().line;
    bool first = true;
    for (const YNoteRef& ref : tokens) {
        if (!first) outs << (ref.line != prev_line ? '\n' : ' ');
        outs << to_hex(ref.token.pitch) << ref.token.duration;
        prev_line = ref.line;
        first = false;
    }
    if (!tokens.empty()) outs << '\n';
    return outs.str();
}

}  // namespace hnote
