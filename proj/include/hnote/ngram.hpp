#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hnote/dataset.hpp"
#include "hnote/score.hpp"

namespace hnote {

struct EmptyCorpus : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Symbol space: 0..255 token codes plus line boundary sentinels.
using Symbol = int;
constexpr Symbol kLineStart = 256;
constexpr Symbol kLineEnd = 257;

std::string symbol_text(Symbol s);
Symbol parse_symbol(const std::string& text);

// Order-k Markov model over HNote token streams with add-alpha smoothing
// and backoff to shorter contexts. Immutable once trained.
class NgramModel {
public:
    static NgramModel train(const std::vector<Score>& corpus, int order = 3,
                            double alpha = 0.1);

    int order() const { return order_; }
    double alpha() const { return alpha_; }
    const std::set<Symbol>& vocabulary() const { return vocabulary_; }

    // Next-symbol distribution for a context (last order-1 symbols used).
    // Falls back to shorter contexts when the full one is unseen.
    // only_tokens restricts the support to token codes (no sentinels).
    std::map<Symbol, double> distribution(const std::vector<Symbol>& context,
                                          bool only_tokens) const;

    // Plain-text count table: versioned header, then
    // "<context tokens>\t<next>\t<count>" lines.
    void save(std::ostream& out) const;
    static NgramModel load(std::istream& in);
    void save_file(const std::string& path) const;
    static NgramModel load_file(const std::string& path);

    bool operator==(const NgramModel&) const = default;

private:
    int order_ = 3;
    double alpha_ = 0.1;
    std::set<Symbol> vocabulary_;
    // Context length n in [0, order-1] -> context -> next -> count.
    std::vector<std::map<std::vector<Symbol>, std::map<Symbol, std::uint64_t>>> counts_;
};

struct GenerationResult {
    Score score;                           // raw token stream, may not validate
    std::vector<bool> last_note_pre_patch; // per line: constraint met before patching
    std::vector<bool> pitch_fallback;      // per line: prompt onset was out of vocabulary
};

// Per line: first token hard-set to first_onset, sampling fills exactly
// measure_count * 32 units, and the final note's onset must equal
// last_onset. The tail is resampled up to max_retries, then the onset is
// patched in place. Deterministic in (model, prompt, seed).
GenerationResult generate(const NgramModel& model, const PromptSpec& prompt,
                          std::uint64_t seed, int max_retries = 64);

}  // namespace hnote
