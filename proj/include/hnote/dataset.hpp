#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hnote/metrics.hpp"
#include "hnote/score.hpp"
#include "hnote/ynote.hpp"

namespace hnote {

// First/last note onset per line, used as generation prompt.
struct PromptSpec {
    struct LinePrompt {
        TokenCode first_onset = 0;
        TokenCode last_onset = 0;
        int measure_count = 0;

        bool operator==(const LinePrompt&) const = default;
    };
    std::vector<LinePrompt> lines;

    bool operator==(const PromptSpec&) const = default;
};

PromptSpec extract_prompts(const Score& score);

// "L<i>: first=<hex> last=<hex> measures=<k>" per line, newline-joined.
std::string render_prompt(const PromptSpec& prompt);

struct DatasetRecord {
    std::string id;
    std::string prompt;
    std::string completion;  // canonical HNote text
};

struct CorpusStats {
    std::size_t pieces = 0;
    std::size_t lines = 0;
    std::size_t measures = 0;
    std::size_t total_units = 0;
    std::map<int, std::size_t> pitch_histogram;  // onsets only, rests included

    std::string to_text() const;
    std::string to_csv() const;
};

struct RejectEntry {
    std::string file;
    std::string reason;
};

struct DatasetBuildResult {
    std::vector<DatasetRecord> train;
    std::vector<DatasetRecord> eval;
    std::vector<RejectEntry> rejects;
    CorpusStats stats;
};

// Converts every .ynote file under corpus_dir, splits by whole piece with
// a seeded Fisher-Yates shuffle over the lexicographic file order, and
// writes train.jsonl / eval.jsonl / stats.txt / stats.csv / rejects.txt
// into out_dir (atomic temp-then-rename). Unconvertible files land in the
// rejects report, not as failures.
DatasetBuildResult build_dataset(const std::filesystem::path& corpus_dir,
                                 const DurationTable& table,
                                 double train_ratio, double eval_ratio,
                                 std::uint64_t seed,
                                 const std::filesystem::path& out_dir);

DatasetBuildResult build_dataset_in_memory(const std::filesystem::path& corpus_dir,
                                           const DurationTable& table,
                                           double train_ratio, double eval_ratio,
                                           std::uint64_t seed);

std::string to_jsonl(const std::vector<DatasetRecord>& records);
std::vector<DatasetRecord> read_jsonl(const std::filesystem::path& path);

CorpusStats corpus_stats(const std::vector<Score>& scores);

struct PieceScore {
    std::string id;
    MetricScores metrics;
};

struct GenerationReport {
    CorrectnessReport correctness;
    std::vector<PieceScore> scores;          // valid pieces only
    std::vector<std::string> missing_reference;

    // Tables-shaped report: rows = pieces, BLEU 1..4 + ROUGE 1/2/L columns.
    std::string to_text() const;
    std::string to_csv() const;
};

// Validates each <id>.hnote under generated_dir and scores the valid ones
// against references[id]. Invalid pieces only count toward the
// correctness rate.
GenerationReport score_generated(const std::filesystem::path& generated_dir,
                                 const std::map<std::string, Score>& references,
                                 BleuMode mode = BleuMode::Individual);

// Reads <id>.hnote files from a directory into an id -> Score map.
std::map<std::string, Score> load_reference_dir(const std::filesystem::path& dir);

// Token stream of a score with delimiters stripped, for metric input.
std::vector<TokenCode> metric_tokens(const Score& score);

}  // namespace hnote
