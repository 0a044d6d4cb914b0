#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hnote/dataset.hpp"
#include "hnote/metrics.hpp"
#include "hnote/midi.hpp"
#include "hnote/ngram.hpp"
#include "hnote/validate.hpp"
#include "hnote/ynote.hpp"

namespace fs = std::filesystem;
using namespace hnote;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << content;
}

std::vector<fs::path> dir_files(const fs::path& dir, const std::string& ext) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ext)
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

struct GlobalOpts {
    std::uint64_t seed = 0;
    std::string duration_table;
    bool quiet = false;

    DurationTable table() const {
        return duration_table.empty() ? DurationTable::defaults()
                                      : DurationTable::load_file(duration_table);
    }
    std::ostream& log() const {
        static std::ostringstream sink;
        if (quiet) { sink.str(""); return sink; }
        return std::cout;
    }
};

int cmd_validate(const GlobalOpts& g, const std::vector<std::string>& files,
                 const std::string& format) {
    std::vector<ValidationReport> reports;
    for (const std::string& file : files) {
        ValidationReport report = validate_text(read_file(file));
        if (!g.quiet) {
            std::cout << file << ": " << (report.valid() ? "valid" : "INVALID") << '\n';
            for (const auto& e : report.errors)
                std::cout << "  [" << to_string(e.category) << "] line " << e.pos.line
                          << " measure " << e.pos.measure << " unit " << e.pos.unit
                          << (e.pos.at_end ? " (end of line)" : "") << ": " << e.message
                          << '\n';
        }
        reports.push_back(std::move(report));
    }
    CorrectnessReport agg = correctness_rate(reports);
    if (format == "csv") {
        std::cout << "total,valid,rate\n"
                  << agg.total << ',' << agg.valid << ','
                  << (agg.defined ? format_rate(agg.rate) : "undefined") << '\n';
    } else {
        std::cout << agg.valid << '/' << agg.total << " valid ("
                  << (agg.defined ? format_rate(agg.rate) : "undefined") << ")\n";
    }
    return agg.valid == agg.total ? 0 : 1;
}

int cmd_convert(const GlobalOpts& g, const std::string& from, const std::string& to,
                bool merge_ties, const std::string& input, const std::string& output) {
    DurationTable table = g.table();
    std::string text = read_file(input);
    if (from == "ynote" && to == "hnote") {
        Score score = ynote_to_hnote(parse_ynote(text, table), table, merge_ties);
        write_output(output, serialize(score));
    } else if (from == "hnote" && to == "ynote") {
        write_output(output, render_ynote(hnote_to_ynote(parse_score(text), table)));
    } else {
        std::cerr << "unsupported conversion " << from << " -> " << to << '\n';
        return 2;
    }
    return 0;
}

int cmd_dataset_build(const GlobalOpts& g, const std::string& corpus,
                      const std::string& out, const std::string& split) {
    double train = 0.9, eval = 0.1;
    if (!split.empty()) {
        auto comma = split.find(',');
        if (comma == std::string::npos) throw CLI::ValidationError("--split", "expected A,B");
        train = std::stod(split.substr(0, comma));
        eval = std::stod(split.substr(comma + 1));
    }
    DatasetBuildResult result = build_dataset(corpus, g.table(), train, eval, g.seed, out);
    g.log() << result.train.size() << " train / " << result.eval.size() << " eval records, "
            << result.rejects.size() << " rejects -> " << out << '\n';
    return 0;
}

std::vector<Score> load_score_dir(const fs::path& dir) {
    std::vector<Score> scores;
    for (const fs::path& file : dir_files(dir, ".hnote"))
        scores.push_back(parse_score(read_file(file)));
    return scores;
}

int cmd_ngram_train(const GlobalOpts& g, const std::string& corpus, const std::string& out,
                    int order, double alpha) {
    std::vector<Score> scores = load_score_dir(corpus);
    NgramModel model = NgramModel::train(scores, order, alpha);
    model.save_file(out);
    g.log() << "trained order-" << order << " model on " << scores.size()
            << " pieces -> " << out << '\n';
    return 0;
}

int cmd_ngram_generate(const GlobalOpts& g, const std::string& model_path,
                       const std::string& references, const std::string& out,
                       int per_ref, int max_retries) {
    NgramModel model = NgramModel::load_file(model_path);
    fs::create_directories(out);
    std::uint64_t seed = g.seed;
    int written = 0;
    for (const fs::path& file : dir_files(references, ".hnote")) {
        PromptSpec prompt = extract_prompts(parse_score(read_file(file)));
        for (int i = 0; i < per_ref; ++i) {
            GenerationResult gen = generate(model, prompt, seed++, max_retries);
            std::string id = file.stem().string() +
                             (per_ref > 1 ? "_" + std::to_string(i) : "");
            write_output((fs::path(out) / (id + ".hnote")).string(),
                         serialize(gen.score));
            ++written;
        }
    }
    g.log() << "generated " << written << " pieces -> " << out << '\n';
    return 0;
}

int cmd_score(const GlobalOpts& g, const std::string& generated,
              const std::string& references, const std::string& bleu_mode,
              const std::string& format) {
    BleuMode mode = bleu_mode == "cumulative" ? BleuMode::Cumulative : BleuMode::Individual;
    GenerationReport report = score_generated(generated, load_reference_dir(references), mode);
    std::cout << (format == "csv" ? report.to_csv() : report.to_text());
    return report.correctness.valid == report.correctness.total ? 0 : 1;
}

int cmd_export_midi(const std::string& input, const std::string& output, int ppq,
                    double tempo_bpm, int velocity, int channel, int program) {
    ExportConfig config;
    config.ppq = ppq;
    config.tempo_us_per_beat = static_cast<std::uint32_t>(60000000.0 / tempo_bpm + 0.5);
    config.velocity = velocity;
    config.channel = channel;
    config.program = program;
    std::vector<std::uint8_t> bytes = export_midi(parse_score(read_file(input)), config);
    std::ofstream out(output, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + output);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    return 0;
}

int cmd_stats(const std::string& dir, const std::string& format) {
    CorpusStats stats = corpus_stats(load_score_dir(dir));
    std::cout << (format == "csv" ? stats.to_csv() : stats.to_text());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HNote codec, converter, dataset pipeline and evaluation harness"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "random seed for dataset splits and generation");
    app.add_option("--duration-table", g.duration_table, "YNote duration table (CODE=UNITS lines)");
    app.add_flag("--quiet", g.quiet, "suppress per-item output");

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "check .hnote files");
    std::vector<std::string> validate_files;
    std::string validate_format = "text";
    validate_cmd->add_option("files", validate_files, "input files")->required();
    validate_cmd->add_option("--format", validate_format, "text|csv");

    // convert
    auto* convert_cmd = app.add_subcommand("convert", "convert between YNote and HNote");
    std::string conv_from, conv_to, conv_in, conv_out;
    bool merge_ties = false;
    convert_cmd->add_option("--from", conv_from, "ynote|hnote")->required();
    convert_cmd->add_option("--to", conv_to, "ynote|hnote")->required();
    convert_cmd->add_flag("--merge-ties", merge_ties,
                          "fuse consecutive same-pitch YNote tokens (one-way)");
    convert_cmd->add_option("input", conv_in, "input file")->required();
    convert_cmd->add_option("-o,--output", conv_out, "output file (default stdout)");

    // dataset build
    auto* dataset_cmd = app.add_subcommand("dataset", "dataset construction");
    auto* dataset_build_cmd = dataset_cmd->add_subcommand("build", "build fine-tuning JSONL");
    std::string ds_corpus, ds_out, ds_split = "0.9,0.1";
    dataset_build_cmd->add_option("--corpus", ds_corpus, ".ynote corpus directory")->required();
    dataset_build_cmd->add_option("--out", ds_out, "output directory")->required();
    dataset_build_cmd->add_option("--split", ds_split, "train,eval ratios");

    // ngram train / generate
    auto* ngram_cmd = app.add_subcommand("ngram", "baseline n-gram generator");
    auto* ngram_train_cmd = ngram_cmd->add_subcommand("train", "train a model");
    std::string nt_corpus, nt_out;
    int nt_order = 3;
    double nt_alpha = 0.1;
    ngram_train_cmd->add_option("--corpus", nt_corpus, ".hnote corpus directory")->required();
    ngram_train_cmd->add_option("--out", nt_out, "model output path")->required();
    ngram_train_cmd->add_option("--order", nt_order, "model order k");
    ngram_train_cmd->add_option("--alpha", nt_alpha, "smoothing");

    auto* ngram_gen_cmd = ngram_cmd->add_subcommand("generate", "generate constrained pieces");
    std::string ng_model, ng_refs, ng_out;
    int ng_per_ref = 1, ng_retries = 64;
    ngram_gen_cmd->add_option("--model", ng_model, "trained model path")->required();
    ngram_gen_cmd->add_option("--references", ng_refs,
                              ".hnote directory supplying the first/last-note prompts")
        ->required();
    ngram_gen_cmd->add_option("--out", ng_out, "output directory")->required();
    ngram_gen_cmd->add_option("--per-ref", ng_per_ref, "generations per reference");
    ngram_gen_cmd->add_option("--max-retries", ng_retries, "last-note resampling budget");

    // score
    auto* score_cmd = app.add_subcommand("score", "validate and score generated pieces");
    std::string sc_gen, sc_refs, sc_mode = "individual", sc_format = "text";
    score_cmd->add_option("--generated", sc_gen, "generated .hnote directory")->required();
    score_cmd->add_option("--references", sc_refs, "reference .hnote directory")->required();
    score_cmd->add_option("--bleu-mode", sc_mode, "individual|cumulative");
    score_cmd->add_option("--format", sc_format, "text|csv");

    // export-midi
    auto* midi_cmd = app.add_subcommand("export-midi", "render .hnote to a MIDI file");
    std::string midi_in, midi_out;
    int midi_ppq = 480, midi_velocity = 90, midi_channel = 0, midi_program = 0;
    double midi_bpm = 60.0;
    midi_cmd->add_option("input", midi_in, "input .hnote file")->required();
    midi_cmd->add_option("-o,--output", midi_out, "output .mid file")->required();
    midi_cmd->add_option("--ppq", midi_ppq, "ticks per quarter (multiple of 8)");
    midi_cmd->add_option("--tempo-bpm", midi_bpm, "tempo in BPM");
    midi_cmd->add_option("--velocity", midi_velocity, "note velocity");
    midi_cmd->add_option("--channel", midi_channel, "MIDI channel");
    midi_cmd->add_option("--program", midi_program, "program number");

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "corpus statistics over .hnote files");
    std::string st_dir, st_format = "text";
    stats_cmd->add_option("dir", st_dir, ".hnote directory")->required();
    stats_cmd->add_option("--format", st_format, "text|csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (*validate_cmd) return cmd_validate(g, validate_files, validate_format);
        if (*convert_cmd) return cmd_convert(g, conv_from, conv_to, merge_ties, conv_in, conv_out);
        if (*dataset_build_cmd) return cmd_dataset_build(g, ds_corpus, ds_out, ds_split);
        if (*ngram_train_cmd) return cmd_ngram_train(g, nt_corpus, nt_out, nt_order, nt_alpha);
        if (*ngram_gen_cmd)
            return cmd_ngram_generate(g, ng_model, ng_refs, ng_out, ng_per_ref, ng_retries);
        if (*score_cmd) return cmd_score(g, sc_gen, sc_refs, sc_mode, sc_format);
        if (*midi_cmd)
            return cmd_export_midi(midi_in, midi_out, midi_ppq, midi_bpm, midi_velocity,
                                   midi_channel, midi_program);
        if (*stats_cmd) return cmd_stats(st_dir, st_format);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    std::cerr << "no subcommand given\n";
    return 2;
}
