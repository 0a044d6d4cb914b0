#include "hnote/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "hnote/validate.hpp"

namespace fs = std::filesystem;

namespace hnote {

PromptSpec extract_prompts(const Score& score) {
    std::vector<Note> notes = assemble_notes(score);
    PromptSpec spec;
    spec.lines.resize(score.lines.size());
    for (std::size_t li = 0; li < score.lines.size(); ++li)
        spec.lines[li].measure_count = static_cast<int>(score.lines[li].size());
    std::vector<bool> seen(score.lines.size(), false);
    for (const Note& note : notes) {
        auto& lp = spec.lines[note.start.line];
        if (!seen[note.start.line]) {
            lp.first_onset = static_cast<TokenCode>(note.pitch);
            seen[note.start.line] = true;
        }
        lp.last_onset = static_cast<TokenCode>(note.pitch);
    }
    return spec;
}

std::string render_prompt(const PromptSpec& prompt) {
    std::ostringstream out;
    for (std::size_t i = 0; i < prompt.lines.size(); ++i) {
        const auto& lp = prompt.lines[i];
        if (i > 0) out << '\n';
        out << 'L' << i << ": first=" << to_hex(lp.first_onset)
            << " last=" << to_hex(lp.last_onset) << " measures=" << lp.measure_count;
    }
    return out.str();
}

CorpusStats corpus_stats(const std::vector<Score>& scores) {
    CorpusStats stats;
    stats.pieces = scores.size();
    for (const Score& score : scores) {
        stats.lines += score.lines.size();
        for (const auto& line : score.lines) stats.measures += line.size();
        stats.total_units += score.total_units();
        for (const Note& note : assemble_notes(score)) ++stats.pitch_histogram[note.pitch];
    }
    return stats;
}

std::string CorpusStats::to_text() const {
    std::ostringstream out;
    out << "pieces:   " << pieces << '\n'
        << "lines:    " << lines << '\n'
        << "measures: " << measures << '\n'
        << "units:    " << total_units << '\n'
        << "pitch histogram (onsets):\n";
    for (const auto& [pitch, count] : pitch_histogram) {
        out << "  " << to_hex(static_cast<TokenCode>(pitch)) << " "
            << (pitch == 0 ? "rest" : pitch_name(pitch)) << ": " << count << '\n';
    }
    return out.str();
}

std::string CorpusStats::to_csv() const {
    std::ostringstream out;
    out << "key,value\n"
        << "pieces," << pieces << '\n'
        << "lines," << lines << '\n'
        << "measures," << measures << '\n'
        << "units," << total_units << '\n';
    for (const auto& [pitch, count] : pitch_histogram)
        out << "pitch_" << to_hex(static_cast<TokenCode>(pitch)) << ',' << count << '\n';
    return out.str();
}

std::string to_jsonl(const std::vector<DatasetRecord>& records) {
    std::ostringstream out;
    for (const DatasetRecord& r : records) {
        nlohmann::ordered_json obj;
        obj["id"] = r.id;
        obj["prompt"] = r.prompt;
        obj["completion"] = r.completion;
        out << obj.dump() << '\n';
    }
    return out.str();
}

std::vector<DatasetRecord> read_jsonl(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<DatasetRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto obj = nlohmann::json::parse(line);
        records.push_back({obj.at("id").get<std::string>(),
                           obj.at("prompt").get<std::string>(),
                           obj.at("completion").get<std::string>()});
    }
    return records;
}

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

std::vector<fs::path> sorted_files(const fs::path& dir, const std::string& ext) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ext)
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

// std::shuffle's draw sequence is implementation-defined; a hand-rolled
// Fisher-Yates keeps splits identical across standard libraries.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[gen() % i]);
}

}  // namespace

DatasetBuildResult build_dataset_in_memory(const fs::path& corpus_dir,
                                           const DurationTable& table,
                                           double train_ratio, double eval_ratio,
                                           std::uint64_t seed) {
    if (std::abs(train_ratio + eval_ratio - 1.0) > 1e-9)
        throw std::invalid_argument("split ratios must sum to 1");
    auto files = sorted_files(corpus_dir, ".ynote");
    if (files.empty()) throw std::runtime_error("no .ynote files in " + corpus_dir.string());

    DatasetBuildResult result;
    std::vector<DatasetRecord> records;
    std::vector<Score> scores;
    for (const fs::path& file : files) {
        try {
            auto tokens = parse_ynote(read_file(file), table);
            if (tokens.empty()) throw ConvertError("file contains no tokens");
            Score score = ynote_to_hnote(tokens, table);
            records.push_back({file.stem().string(),
                               render_prompt(extract_prompts(score)), serialize(score)});
            scores.push_back(std::move(score));
        } catch (const std::exception& e) {
            result.rejects.push_back({file.filename().string(), e.what()});
        }
    }
    result.stats = corpus_stats(scores);

    deterministic_shuffle(records, seed);
    std::size_t train_n =
        static_cast<std::size_t>(std::llround(train_ratio * records.size()));
    train_n = std::min(train_n, records.size());
    result.train.assign(records.begin(), records.begin() + train_n);
    result.eval.assign(records.begin() + train_n, records.end());
    auto by_id = [](const DatasetRecord& a, const DatasetRecord& b) { return a.id < b.id; };
    std::sort(result.train.begin(), result.train.end(), by_id);
    std::sort(result.eval.begin(), result.eval.end(), by_id);
    return result;
}

DatasetBuildResult build_dataset(const fs::path& corpus_dir, const DurationTable& table,
                                 double train_ratio, double eval_ratio,
                                 std::uint64_t seed, const fs::path& out_dir) {
    DatasetBuildResult result =
        build_dataset_in_memory(corpus_dir, table, train_ratio, eval_ratio, seed);
    fs::create_directories(out_dir);
    write_file_atomic(out_dir / "train.jsonl", to_jsonl(result.train));
    write_file_atomic(out_dir / "eval.jsonl", to_jsonl(result.eval));
    write_file_atomic(out_dir / "stats.txt", result.stats.to_text());
    write_file_atomic(out_dir / "stats.csv", result.stats.to_csv());
    std::ostringstream rej;
    for (const RejectEntry& r : result.rejects) rej << r.file << ": " << r.reason << '\n';
    write_file_atomic(out_dir / "rejects.txt", rej.str());
    return result;
}

std::vector<TokenCode> metric_tokens(const Score& score) {
    std::vector<TokenCode> tokens;
    tokens.reserve(score.total_units());
    for (const auto& line : score.lines)
        for (const auto& measure : line)
            tokens.insert(tokens.end(), measure.units.begin(), measure.units.end());
    return tokens;
}

std::map<std::string, Score> load_reference_dir(const fs::path& dir) {
    std::map<std::string, Score> refs;
    for (const fs::path& file : sorted_files(dir, ".hnote"))
        refs[file.stem().string()] = parse_score(read_file(file));
    return refs;
}

GenerationReport score_generated(const fs::path& generated_dir,
                                 const std::map<std::string, Score>& references,
                                 BleuMode mode) {
    GenerationReport report;
    std::vector<ValidationReport> validations;
    for (const fs::path& file : sorted_files(generated_dir, ".hnote")) {
        std::string id = file.stem().string();
        std::string text = read_file(file);
        TokenizeResult tokens = tokenize(text);
        ValidationReport validation = validate(tokens);
        validations.push_back(validation);
        if (!validation.valid()) continue;
        auto ref = references.find(id);
        if (ref == references.end()) {
            report.missing_reference.push_back(id);
            continue;
        }
        Score score = build_score(tokens);
        report.scores.push_back(
            {id, score_pair(metric_tokens(score), metric_tokens(ref->second), mode)});
    }
    report.correctness = correctness_rate(validations);
    return report;
}

namespace {
std::string fmt3(double v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}
}  // namespace

std::string GenerationReport::to_text() const {
    std::ostringstream out;
    out << correctness.valid << '/' << correctness.total << " valid ("
        << (correctness.defined ? format_rate(correctness.rate) : "undefined") << ")\n";
    for (const auto& [cat, count] : correctness.error_histogram)
        out << "  " << to_string(cat) << ": " << count << '\n';
    for (const std::string& id : missing_reference)
        out << "  missing reference: " << id << '\n';
    out << "id                1-gram 2-gram 3-gram 4-gram ROUGE-1 ROUGE-2 ROUGE-L\n";
    for (const PieceScore& p : scores) {
        out << p.id;
        for (std::size_t i = p.id.size(); i < 18; ++i) out << ' ';
        const auto& m = p.metrics;
        out << fmt3(m.bleu.score[0]) << "  " << fmt3(m.bleu.score[1]) << "  "
            << fmt3(m.bleu.score[2]) << "  " << fmt3(m.bleu.score[3]) << "  "
            << fmt3(m.rouge1) << "   " << fmt3(m.rouge2) << "   "
            << fmt3(m.rouge_l.f1) << '\n';
    }
    return out.str();
}

std::string GenerationReport::to_csv() const {
    std::ostringstream out;
    out << "id,valid,bleu1,bleu2,bleu3,bleu4,brevity_penalty,rouge1,rouge2,"
           "rougeL_precision,rougeL_recall,rougeL_f1\n";
    for (const PieceScore& p : scores) {
        const auto& m = p.metrics;
        out << p.id << ",1," << fmt3(m.bleu.score[0]) << ',' << fmt3(m.bleu.score[1]) << ','
            << fmt3(m.bleu.score[2]) << ',' << fmt3(m.bleu.score[3]) << ','
            << fmt3(m.bleu.brevity_penalty) << ',' << fmt3(m.rouge1) << ','
            << fmt3(m.rouge2) << ',' << fmt3(m.rouge_l.precision) << ','
            << fmt3(m.rouge_l.recall) << ',' << fmt3(m.rouge_l.f1) << '\n';
    }
    return out.str();
}

}  // namespace hnote
