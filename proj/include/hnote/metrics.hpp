#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

#include "hnote/token.hpp"
#include "hnote/validate.hpp"

namespace hnote {

struct EmptySequence : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class BleuMode {
    Individual,  // p_n * BP per column (default)
    Cumulative,  // BP * exp(mean log p_n, n <= N)
};

struct BleuResult {
    std::array<double, 4> score{};  // index n-1
    double brevity_penalty = 1.0;
};

struct RougeL {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct MetricScores {
    BleuResult bleu;
    double rouge1 = 0.0;  // recall
    double rouge2 = 0.0;  // recall
    RougeL rouge_l;
};

// Token sequences are bare TokenCodes; structural delimiters never enter
// the n-grams. No smoothing: a zero precision stays zero.
BleuResult bleu(const std::vector<TokenCode>& candidate,
                const std::vector<TokenCode>& reference,
                int max_n = 4, BleuMode mode = BleuMode::Individual);

// Clipped n-gram matches over reference n-gram count.
double rouge_n(const std::vector<TokenCode>& candidate,
               const std::vector<TokenCode>& reference, int n);

// LCS-based precision/recall/F1.
RougeL rouge_l(const std::vector<TokenCode>& candidate,
               const std::vector<TokenCode>& reference);

MetricScores score_pair(const std::vector<TokenCode>& candidate,
                        const std::vector<TokenCode>& reference,
                        BleuMode mode = BleuMode::Individual);

struct CorrectnessReport {
    std::size_t total = 0;
    std::size_t valid = 0;
    double rate = 0.0;       // valid / total, 0 when undefined
    bool defined = false;    // false iff total == 0
    std::map<ErrorCategory, std::size_t> error_histogram;
};

CorrectnessReport correctness_rate(const std::vector<ValidationReport>& reports);

// Percentage with one decimal, e.g. 0.82545 -> "82.5%".
std::string format_rate(double rate);

}  // namespace hnote
