#include "hnote/ngram.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

namespace hnote {

std::string symbol_text(Symbol s) {
    if (s == kLineStart) return "^";
    if (s == kLineEnd) return "$";
    return to_hex(static_cast<TokenCode>(s));
}

Symbol parse_symbol(const std::string& text) {
    if (text == "^") return kLineStart;
    if (text == "$") return kLineEnd;
    auto code = parse_hex(text);
    if (!code) throw std::runtime_error("bad model symbol '" + text + "'");
    return *code;
}

namespace {

std::vector<Symbol> line_stream(const std::vector<Measure>& line, int order) {
    std::vector<Symbol> stream(order - 1, kLineStart);
    for (const Measure& m : line)
        for (TokenCode c : m.units) stream.push_back(c);
    stream.push_back(kLineEnd);
    return stream;
}

double canonical_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

NgramModel NgramModel::train(const std::vector<Score>& corpus, int order, double alpha) {
    if (corpus.empty()) throw EmptyCorpus("training corpus is empty");
    if (order < 1) throw std::invalid_argument("ngram order must be >= 1");
    if (alpha < 0.0) throw std::invalid_argument("smoothing alpha must be >= 0");

    NgramModel model;
    model.order_ = order;
    model.alpha_ = alpha;
    model.counts_.resize(order);
    for (const Score& score : corpus) {
        for (const auto& line : score.lines) {
            std::vector<Symbol> stream = line_stream(line, order);
            for (std::size_t i = order - 1; i < stream.size(); ++i) {
                model.vocabulary_.insert(stream[i]);
                for (int n = 0; n < order; ++n) {
                    std::vector<Symbol> context(stream.begin() + i - n, stream.begin() + i);
                    model.counts_[n][context][stream[i]] += 1;
                }
            }
        }
    }
    if (order > 1) model.vocabulary_.insert(kLineStart);
    return model;
}

std::map<Symbol, double> NgramModel::distribution(const std::vector<Symbol>& context,
                                                  bool only_tokens) const {
    int max_ctx = std::min<int>(order_ - 1, static_cast<int>(context.size()));
    for (int n = max_ctx; n >= 0; --n) {
        std::vector<Symbol> key(context.end() - n, context.end());
        auto level = counts_[n].find(key);
        if (level == counts_[n].end()) continue;

        std::map<Symbol, double> weights;
        if (alpha_ > 0.0) {
            for (Symbol s : vocabulary_) {
                if (only_tokens && s >= 256) continue;
                if (s == kLineStart) continue;  // never emitted
                weights[s] = alpha_;
            }
        }
        for (const auto& [next, count] : level->second) {
            if (only_tokens && next >= 256) continue;
            weights[next] += static_cast<double>(count);
        }
        if (weights.empty()) continue;  // back off further
        double total = 0.0;
        for (const auto& [s, w] : weights) total += w;
        for (auto& [s, w] : weights) w /= total;
        return weights;
    }
    throw std::runtime_error("no distribution available for context");
}

void NgramModel::save(std::ostream& out) const {
    out << "hnote-ngram v1 order=" << order_ << " alpha=" << alpha_ << '\n';
    for (int n = 0; n < order_; ++n) {
        for (const auto& [context, nexts] : counts_[n]) {
            for (const auto& [next, count] : nexts) {
                for (std::size_t i = 0; i < context.size(); ++i) {
                    if (i > 0) out << ' ';
                    out << symbol_text(context[i]);
                }
                out << '\t' << symbol_text(next) << '\t' << count << '\n';
            }
        }
    }
}

NgramModel NgramModel::load(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("empty model file");
    NgramModel model;
    {
        std::istringstream hs(header);
        std::string magic, field;
        hs >> magic >> field;
        if (magic != "hnote-ngram" || field != "v1")
            throw std::runtime_error("unrecognized model header: " + header);
        while (hs >> field) {
            if (field.rfind("order=", 0) == 0)
                model.order_ = std::atoi(field.c_str() + 6);
            else if (field.rfind("alpha=", 0) == 0)
                model.alpha_ = std::atof(field.c_str() + 6);
        }
    }
    if (model.order_ < 1) throw std::runtime_error("bad model order");
    model.counts_.resize(model.order_);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto t1 = line.find('\t');
        auto t2 = line.find('\t', t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos)
            throw std::runtime_error("bad model line: " + line);
        std::vector<Symbol> context;
        std::istringstream cs(line.substr(0, t1));
        std::string word;
        while (cs >> word) context.push_back(parse_symbol(word));
        if (static_cast<int>(context.size()) >= model.order_)
            throw std::runtime_error("context longer than model order: " + line);
        Symbol next = parse_symbol(line.substr(t1 + 1, t2 - t1 - 1));
        std::uint64_t count = std::strtoull(line.c_str() + t2 + 1, nullptr, 10);
        model.counts_[context.size()][context][next] += count;
        model.vocabulary_.insert(next);
        for (Symbol s : context) model.vocabulary_.insert(s);
    }
    return model;
}

void NgramModel::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write model: " + path);
    save(out);
}

NgramModel NgramModel::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model: " + path);
    return load(in);
}

namespace {

Symbol sample(const std::map<Symbol, double>& dist, std::mt19937_64& gen) {
    double u = canonical_unit(gen);
    double acc = 0.0;
    for (const auto& [s, p] : dist) {
        acc += p;
        if (u < acc) return s;
    }
    return dist.rbegin()->first;  // guard against rounding at the tail
}

TokenCode nearest_onset(const std::set<Symbol>& vocab, TokenCode wanted) {
    int best = -1;
    for (Symbol s : vocab) {
        if (s >= 0x80) continue;  // onsets only
        if (best < 0 || std::abs(s - wanted) < std::abs(best - wanted)) best = s;
    }
    return best < 0 ? wanted : static_cast<TokenCode>(best);
}

int last_onset_index(const std::vector<TokenCode>& units) {
    for (int i = static_cast<int>(units.size()) - 1; i >= 0; --i)
        if (is_onset(units[i])) return i;
    return -1;
}

}  // namespace

GenerationResult generate(const NgramModel& model, const PromptSpec& prompt,
                          std::uint64_t seed, int max_retries) {
    std::mt19937_64 gen(seed);
    GenerationResult result;

    auto context_tail = [&model](const std::vector<TokenCode>& units) {
        std::vector<Symbol> ctx(model.order() - 1, kLineStart);
        for (TokenCode c : units) ctx.push_back(c);
        return ctx;
    };

    std::vector<std::vector<TokenCode>> lines;
    for (std::size_t li = 0; li < prompt.lines.size(); ++li) {
        const auto& lp = prompt.lines[li];
        int target_units = lp.measure_count * kUnitsPerMeasure;
        if (target_units <= 0)
            throw std::invalid_argument("prompt line has no measures");

        bool fallback = false;
        TokenCode first = lp.first_onset;
        if (!model.vocabulary().count(first)) {
            first = nearest_onset(model.vocabulary(), first);
            fallback = true;
        }
        TokenCode last = lp.last_onset;
        if (!model.vocabulary().count(last)) {
            last = nearest_onset(model.vocabulary(), last);
            fallback = true;
        }

        std::vector<TokenCode> units;
        units.push_back(first);
        auto extend_to_target = [&]() {
            while (static_cast<int>(units.size()) < target_units) {
                auto dist = model.distribution(context_tail(units), /*only_tokens=*/true);
                units.push_back(static_cast<TokenCode>(sample(dist, gen)));
            }
        };
        extend_to_target();

        bool satisfied = false;
        for (int attempt = 0; attempt < max_retries; ++attempt) {
            int idx = last_onset_index(units);
            if (units[idx] == last) { satisfied = true; break; }
            // resample the final note: regenerate from its onset position
            units.resize(std::max(idx, 1));
            extend_to_target();
        }
        int idx = last_onset_index(units);
        if (units[idx] == last) {
            satisfied = true;
        } else {
            // hard patch: rewrite the final note in place; if the whole
            // line is one note, split it so the first onset survives
            int patch_idx = idx;
            if (idx == 0 && first != last) patch_idx = std::max(1, target_units / 2);
            units[patch_idx] = last;
            for (std::size_t j = patch_idx + 1; j < units.size(); ++j)
                units[j] = continuation_for(last);
            satisfied = false;
        }
        result.last_note_pre_patch.push_back(satisfied);
        result.pitch_fallback.push_back(fallback);
        lines.push_back(std::move(units));
    }

    for (std::size_t li = 0; li < lines.size(); ++li) {
        result.score.lines.emplace_back();
        auto& line = result.score.lines.back();
        for (std::size_t i = 0; i < lines[li].size(); ++i) {
            if (i % kUnitsPerMeasure == 0) line.emplace_back();
            line.back().units[i % kUnitsPerMeasure] = lines[li][i];
        }
    }
    return result;
}

}  // namespace hnote
