#include "hnote/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>

namespace hnote {

namespace {

using Ngram = std::vector<TokenCode>;

std::map<Ngram, int> ngram_counts(const std::vector<TokenCode>& seq, int n) {
    std::map<Ngram, int> counts;
    if (static_cast<int>(seq.size()) < n) return counts;
    for (std::size_t i = 0; i + n <= seq.size(); ++i)
        counts[Ngram(seq.begin() + i, seq.begin() + i + n)] += 1;
    return counts;
}

// Clipped matches: per n-gram, min(candidate count, reference count).
long clipped_matches(const std::vector<TokenCode>& candidate,
                     const std::vector<TokenCode>& reference, int n) {
    auto cand = ngram_counts(candidate, n);
    auto ref = ngram_counts(reference, n);
    long matches = 0;
    for (const auto& [gram, count] : cand) {
        auto it = ref.find(gram);
        if (it != ref.end()) matches += std::min(count, it->second);
    }
    return matches;
}

std::size_t lcs_length(const std::vector<TokenCode>& a, const std::vector<TokenCode>& b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                          : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

void require_nonempty(const std::vector<TokenCode>& candidate,
                      const std::vector<TokenCode>& reference) {
    if (candidate.empty() || reference.empty())
        throw EmptySequence("metric input sequence is empty");
}

}  // namespace

BleuResult bleu(const std::vector<TokenCode>& candidate,
                const std::vector<TokenCode>& reference, int max_n, BleuMode mode) {
    require_nonempty(candidate, reference);
    if (max_n < 1 || max_n > 4) throw std::invalid_argument("bleu: max_n must be in 1..4");

    BleuResult result;
    result.brevity_penalty = std::min(
        1.0, std::exp(1.0 - static_cast<double>(reference.size()) / candidate.size()));

    std::array<double, 4> precision{};
    for (int n = 1; n <= max_n; ++n) {
        long total = std::max<long>(0, static_cast<long>(candidate.size()) - n + 1);
        precision[n - 1] =
            total == 0 ? 0.0
                       : static_cast<double>(clipped_matches(candidate, reference, n)) / total;
    }

    for (int n = 1; n <= max_n; ++n) {
        if (mode == BleuMode::Individual) {
            result.score[n - 1] = precision[n - 1] * result.brevity_penalty;
        } else {
            // geometric mean of p_1..p_n; any zero precision zeroes the score
            double log_sum = 0.0;
            bool zero = false;
            for (int k = 1; k <= n; ++k) {
                if (precision[k - 1] <= 0.0) { zero = true; break; }
                log_sum += std::log(precision[k - 1]);
            }
            result.score[n - 1] = zero ? 0.0 : result.brevity_penalty * std::exp(log_sum / n);
        }
    }
    return result;
}

double rouge_n(const std::vector<TokenCode>& candidate,
               const std::vector<TokenCode>& reference, int n) {
    require_nonempty(candidate, reference);
    if (n < 1) throw std::invalid_argument("rouge_n: n must be positive");
    if (static_cast<int>(reference.size()) < n)
        throw std::invalid_argument("rouge_n: reference shorter than n");
    long ref_total = static_cast<long>(reference.size()) - n + 1;
    return static_cast<double>(clipped_matches(candidate, reference, n)) / ref_total;
}

RougeL rouge_l(const std::vector<TokenCode>& candidate,
               const std::vector<TokenCode>& reference) {
    require_nonempty(candidate, reference);
    double lcs = static_cast<double>(lcs_length(candidate, reference));
    RougeL r;
    r.precision = lcs / candidate.size();
    r.recall = lcs / reference.size();
    r.f1 = lcs == 0.0 ? 0.0
                      : 2.0 * r.precision * r.recall / (r.precision + r.recall);
    return r;
}

MetricScores score_pair(const std::vector<TokenCode>& candidate,
                        const std::vector<TokenCode>& reference, BleuMode mode) {
    MetricScores s;
    s.bleu = bleu(candidate, reference, 4, mode);
    s.rouge1 = rouge_n(candidate, reference, 1);
    s.rouge2 = reference.size() >= 2 ? rouge_n(candidate, reference, 2) : 0.0;
    s.rouge_l = rouge_l(candidate, reference);
    return s;
}

CorrectnessReport correctness_rate(const std::vector<ValidationReport>& reports) {
    CorrectnessReport out;
    out.total = reports.size();
    for (const ValidationReport& r : reports) {
        if (r.valid()) {
            ++out.valid;
        } else {
            for (const ValidationError& e : r.errors) ++out.error_histogram[e.category];
        }
    }
    out.defined = out.total > 0;
    out.rate = out.defined ? static_cast<double>(out.valid) / out.total : 0.0;
    return out;
}

std::string format_rate(double rate) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", rate * 100.0);
    return buf;
}

}  // namespace hnote
