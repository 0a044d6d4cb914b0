#pragma once

// Shared generators and brute-force oracles for the test suites. The
// oracles stay independent of the library's own metric/codec paths.

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "hnote/score.hpp"
#include "hnote/token.hpp"
#include "hnote/ynote.hpp"

namespace testutil {

using hnote::TokenCode;

inline const std::vector<int>& duration_choices() {
    static const std::vector<int> d = {1, 2, 4, 8, 12, 16, 24, 32};
    return d;
}

// Random valid score. With distinct_adjacent, consecutive notes never
// share a pitch code (so every onset->continuation mutation is
// structurally detectable instead of reading as a tie).
inline hnote::Score random_score(std::mt19937_64& gen, bool distinct_adjacent = false,
                                 int max_lines = 3, int max_measures = 3) {
    int n_lines = 1 + static_cast<int>(gen() % max_lines);
    std::vector<hnote::Note> notes;
    for (int li = 0; li < n_lines; ++li) {
        int measures = 1 + static_cast<int>(gen() % max_measures);
        int remaining = measures * hnote::kUnitsPerMeasure;
        int prev_pitch = -1;
        while (remaining > 0) {
            int dur = duration_choices()[gen() % duration_choices().size()];
            if (dur > remaining) dur = remaining;
            int pitch;
            do {
                pitch = gen() % 3 == 0 ? 0 : 0x15 + static_cast<int>(gen() % 88);
            } while (distinct_adjacent && pitch == prev_pitch);
            notes.push_back({pitch, dur, {li, 0, 0}});
            prev_pitch = pitch;
            remaining -= dur;
        }
    }
    return hnote::emit_tokens(notes);
}

// Random parseable YNote token sequence whose lines are bar-aligned.
inline std::vector<hnote::YNoteRef> random_ynote(std::mt19937_64& gen,
                                                 const hnote::DurationTable& table) {
    std::vector<std::pair<int, std::string>> codes;
    for (const auto& [code, units] : table.entries()) codes.emplace_back(units, code);
    std::vector<hnote::YNoteRef> out;
    int n_lines = 1 + static_cast<int>(gen() % 3);
    for (int li = 0; li < n_lines; ++li) {
        int remaining = (1 + static_cast<int>(gen() % 3)) * hnote::kUnitsPerMeasure;
        while (remaining > 0) {
            const auto& pick = codes[gen() % codes.size()];
            if (pick.first > remaining) continue;
            TokenCode pitch = gen() % 4 == 0
                                  ? hnote::kRest
                                  : static_cast<TokenCode>(0x15 + gen() % 88);
            out.push_back({li, {pitch, pick.second}});
            remaining -= pick.first;
        }
    }
    return out;
}

inline std::vector<TokenCode> random_tokens(std::mt19937_64& gen, std::size_t len,
                                            int alphabet = 8) {
    std::vector<TokenCode> out(len);
    for (auto& t : out) t = static_cast<TokenCode>(0x3C + gen() % alphabet);
    return out;
}

// --- brute-force metric oracles -------------------------------------

inline std::map<std::vector<TokenCode>, int> oracle_ngrams(
    const std::vector<TokenCode>& seq, int n) {
    std::map<std::vector<TokenCode>, int> counts;
    for (int i = 0; i + n <= static_cast<int>(seq.size()); ++i)
        counts[std::vector<TokenCode>(seq.begin() + i, seq.begin() + i + n)] += 1;
    return counts;
}

inline double oracle_clipped_precision(const std::vector<TokenCode>& cand,
                                       const std::vector<TokenCode>& ref, int n) {
    auto c = oracle_ngrams(cand, n);
    auto r = oracle_ngrams(ref, n);
    long match = 0, total = 0;
    for (const auto& [gram, count] : c) {
        total += count;
        auto it = r.find(gram);
        if (it != r.end()) match += std::min(count, it->second);
    }
    return total == 0 ? 0.0 : static_cast<double>(match) / total;
}

inline double oracle_rouge_n(const std::vector<TokenCode>& cand,
                             const std::vector<TokenCode>& ref, int n) {
    auto c = oracle_ngrams(cand, n);
    auto r = oracle_ngrams(ref, n);
    long match = 0, total = 0;
    for (const auto& [gram, count] : r) {
        total += count;
        auto it = c.find(gram);
        if (it != c.end()) match += std::min(count, it->second);
    }
    return total == 0 ? 0.0 : static_cast<double>(match) / total;
}

inline bool is_subsequence(const std::vector<TokenCode>& sub,
                           const std::vector<TokenCode>& seq) {
    std::size_t i = 0;
    for (TokenCode c : seq)
        if (i < sub.size() && sub[i] == c) ++i;
    return i == sub.size();
}

// Exhaustive LCS for candidate length <= 20: enumerate candidate subsets.
inline int oracle_lcs(const std::vector<TokenCode>& cand,
                      const std::vector<TokenCode>& ref) {
    int best = 0;
    for (unsigned mask = 0; mask < (1u << cand.size()); ++mask) {
        std::vector<TokenCode> sub;
        for (std::size_t i = 0; i < cand.size(); ++i)
            if (mask & (1u << i)) sub.push_back(cand[i]);
        if (static_cast<int>(sub.size()) > best && is_subsequence(sub, ref))
            best = static_cast<int>(sub.size());
    }
    return best;
}

// Unit-sum oracle: total units of a token stream, counting each token as
// one unit (onset or continuation alike).
inline int unit_sum(const std::vector<TokenCode>& tokens) {
    return static_cast<int>(tokens.size());
}

}  // namespace testutil
