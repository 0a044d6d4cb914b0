#include "hnote/score.hpp"

#include <sstream>

namespace hnote {

std::size_t Score::total_units() const {
    std::size_t n = 0;
    for (const auto& line : lines) n += line.size() * kUnitsPerMeasure;
    return n;
}

std::vector<Note> assemble_notes(const Score& score) {
    std::vector<Note> notes;
    for (int li = 0; li < static_cast<int>(score.lines.size()); ++li) {
        const auto& line = score.lines[li];
        int open_pitch = -1;  // pitch of the note still collecting continuations
        for (int mi = 0; mi < static_cast<int>(line.size()); ++mi) {
            for (int ui = 0; ui < kUnitsPerMeasure; ++ui) {
                TokenCode c = line[mi].units[ui];
                if (is_onset(c)) {
                    notes.push_back({c, 1, {li, mi, ui}});
                    open_pitch = c;
                } else {
                    if (open_pitch < 0 || continuation_of(c) != open_pitch)
                        throw std::invalid_argument(
                            "unvalidated score: orphan continuation " + to_hex(c) +
                            " at line " + std::to_string(li));
                    notes.back().duration_units += 1;
                }
            }
        }
    }
    return notes;
}

Score emit_tokens(const std::vector<Note>& notes) {
    Score score;
    std::vector<TokenCode> current;
    int current_line = notes.empty() ? 0 : notes.front().start.line;

    auto flush = [&score, &current, &current_line]() {
        if (current.size() % kUnitsPerMeasure != 0 || current.empty())
            throw DurationOverflow("line " + std::to_string(current_line) + " has " +
                                   std::to_string(current.size()) +
                                   " units, not a positive multiple of 32");
        while (static_cast<int>(score.lines.size()) <= current_line)
            score.lines.emplace_back();
        auto& line = score.lines[current_line];
        for (std::size_t i = 0; i < current.size(); ++i) {
            if (i % kUnitsPerMeasure == 0) line.emplace_back();
            line.back().units[i % kUnitsPerMeasure] = current[i];
        }
        current.clear();
    };

    for (const Note& note : notes) {
        if (note.start.line != current_line) {
            flush();
            current_line = note.start.line;
        }
        current.push_back(static_cast<TokenCode>(note.pitch));
        for (int i = 1; i < note.duration_units; ++i)
            current.push_back(continuation_for(static_cast<TokenCode>(note.pitch)));
    }
    if (!notes.empty()) flush();
    return score;
}

std::string serialize(const Score& score) {
    std::ostringstream out;
    for (const auto& line : score.lines) {
        for (std::size_t mi = 0; mi < line.size(); ++mi) {
            if (mi > 0) out << " | ";
            for (int ui = 0; ui < kUnitsPerMeasure; ++ui) {
                if (ui > 0) out << ' ';
                out << to_hex(line[mi].units[ui]);
            }
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace hnote
