#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "hnote/score.hpp"
#include "hnote/token.hpp"
#include "hnote/validate.hpp"

using namespace hnote;

TEST_CASE("token partition and continuation mapping") {
    for (int v = 0; v <= 0xFF; ++v) {
        TokenCode c = static_cast<TokenCode>(v);
        CHECK(is_onset(c) != is_continuation(c));
        if (is_continuation(c)) CHECK(continuation_of(c) == v - 0x80);
    }
    CHECK(continuation_for(0x00) == 0x80);
    CHECK(continuation_for(0x3C) == 0xBC);
}

TEST_CASE("pitch names anchor the semitone ladder") {
    CHECK(pitch_name(0x3C) == "C4");
    CHECK(pitch_name(0x15) == "A0");
    CHECK(pitch_name(0x00) == "C-1");
    CHECK(pitch_name(0x01) == "C#-1");
    CHECK(pitch_name(0x43) == "G4");
    CHECK_THROWS_AS(pitch_name(0x80), std::out_of_range);
    CHECK_THROWS_AS(pitch_name(-1), std::out_of_range);
}

TEST_CASE("duration table in integer units") {
    CHECK(kWholeUnits == 32);
    CHECK(kDottedHalfUnits == 24);
    CHECK(kHalfUnits == 16);
    CHECK(kQuarterUnits == 8);
    CHECK(kEighthUnits == 4);
    CHECK(kSixteenthUnits == 2);
    CHECK(kThirtySecondUnits == 1);
}

TEST_CASE("tokenize quoted style") {
    auto result = tokenize(R"("00", "24", "7F")");
    REQUIRE(result.ok());
    REQUIRE(result.tokens.size() == 3);
    CHECK(result.tokens[0] == TokenRef{0, 0x00});
    CHECK(result.tokens[1] == TokenRef{0, 0x24});
    CHECK(result.tokens[2] == TokenRef{0, 0x7F});
}

TEST_CASE("tokenize canonical style strips delimiters") {
    auto result = tokenize("3C BC | 3C");
    REQUIRE(result.ok());
    REQUIRE(result.tokens.size() == 3);
    CHECK(result.tokens[0].code == 0x3C);
    CHECK(result.tokens[1].code == 0xBC);
    CHECK(result.tokens[2].code == 0x3C);
}

TEST_CASE("tokenize empty document") {
    auto result = tokenize("");
    CHECK(result.ok());
    CHECK(result.tokens.empty());
    CHECK(result.line_count == 0);
}

TEST_CASE("tokenize rejects non-hex lexemes with position") {
    auto result = tokenize("3C XY 40");
    CHECK_FALSE(result.ok());
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].category == ErrorCategory::InvalidToken);
    CHECK(result.errors[0].pos.unit == 1);
    CHECK(result.tokens.size() == 2);
}

TEST_CASE("tokenize tracks line indices across blank lines") {
    auto result = tokenize("3C 3D\n\n3E 3F\n");
    REQUIRE(result.tokens.size() == 4);
    CHECK(result.line_count == 2);
    CHECK(result.tokens[2].line == 1);
}

static std::string whole_note_line() {
    std::string text = "3C";
    for (int i = 0; i < 31; ++i) text += " BC";
    return text + "\n";
}

TEST_CASE("validate accepts a whole note measure") {
    CHECK(validate_text(whole_note_line()).valid());
}

TEST_CASE("validate flags a 31-unit line as incomplete") {
    std::string text = "3C";
    for (int i = 0; i < 30; ++i) text += " BC";
    auto report = validate_text(text);
    CHECK_FALSE(report.valid());
    REQUIRE(report.errors.size() == 1);
    CHECK(report.errors[0].category == ErrorCategory::IncompleteMeasure);
    CHECK(report.errors[0].pos.at_end);
}

TEST_CASE("validate flags a line starting with a continuation") {
    std::string text = "BC";
    for (int i = 0; i < 31; ++i) text += " BC";
    auto report = validate_text(text);
    CHECK_FALSE(report.valid());
    CHECK(report.has(ErrorCategory::OrphanContinuation));
    CHECK(report.errors[0].pos.unit == 0);
}

TEST_CASE("validate allows ties across the barline") {
    // 40-unit note spanning two measures
    std::vector<Note> notes = {{0x3C, 40, {0, 0, 0}}, {0x43, 24, {0, 0, 0}}};
    Score score = emit_tokens(notes);
    CHECK(validate_text(serialize(score)).valid());
}

TEST_CASE("validate reports mismatched continuation") {
    std::string text = "3C BD";
    for (int i = 0; i < 30; ++i) text += " BC";
    auto report = validate_text(text);
    CHECK(report.has(ErrorCategory::OrphanContinuation));
}

TEST_CASE("validate reports empty line among content") {
    auto report = validate_text("|\n");
    CHECK(report.has(ErrorCategory::EmptyLine));
}

TEST_CASE("assemble_notes splits half note and half rest") {
    std::string text = "3C";
    for (int i = 0; i < 15; ++i) text += " BC";
    text += " 00";
    for (int i = 0; i < 15; ++i) text += " 80";
    auto notes = assemble_notes(parse_score(text));
    REQUIRE(notes.size() == 2);
    CHECK(notes[0] == Note{0x3C, 16, {0, 0, 0}});
    CHECK(notes[1].is_rest());
    CHECK(notes[1] == Note{0x00, 16, {0, 0, 16}});
}

TEST_CASE("assemble_notes whole note") {
    auto notes = assemble_notes(parse_score(whole_note_line()));
    REQUIRE(notes.size() == 1);
    CHECK(notes[0].pitch == 60);
    CHECK(notes[0].duration_units == 32);
}

TEST_CASE("assemble_notes dotted half plus quarter") {
    std::string text = "3C";
    for (int i = 0; i < 23; ++i) text += " BC";
    text += " 43";
    for (int i = 0; i < 7; ++i) text += " C3";
    auto notes = assemble_notes(parse_score(text));
    REQUIRE(notes.size() == 2);
    CHECK(notes[0].pitch == 60);
    CHECK(notes[0].duration_units == 24);
    CHECK(notes[1].pitch == 67);
    CHECK(notes[1].duration_units == 8);
    // unit-sum oracle over the emitted runs
    CHECK(notes[0].duration_units + notes[1].duration_units == 32);
}

TEST_CASE("assemble_notes rejects unvalidated scores") {
    Score bad;
    bad.lines.emplace_back();
    bad.lines[0].emplace_back();
    bad.lines[0][0].units.fill(0xBC);  // starts with a continuation
    CHECK_THROWS_AS(assemble_notes(bad), std::invalid_argument);
}

TEST_CASE("emit_tokens four quarters fill one measure") {
    std::vector<Note> notes(4, Note{0x3C, 8, {0, 0, 0}});
    Score score = emit_tokens(notes);
    REQUIRE(score.lines.size() == 1);
    REQUIRE(score.lines[0].size() == 1);
    const auto& m = score.lines[0][0];
    for (int i = 0; i < 32; ++i) CHECK(m.units[i] == (i % 8 == 0 ? 0x3C : 0xBC));
}

TEST_CASE("emit_tokens rejects non-bar-aligned lines") {
    CHECK_THROWS_AS(emit_tokens({{0x3C, 7, {0, 0, 0}}}), DurationOverflow);
}

TEST_CASE("round trip: serialize/tokenize and emit/assemble") {
    std::mt19937_64 gen(20240824);
    for (int i = 0; i < 200; ++i) {
        Score score = testutil::random_score(gen);
        std::string text = serialize(score);
        CHECK(parse_score(text) == score);
        CHECK(serialize(parse_score(text)) == text);
        CHECK(emit_tokens(assemble_notes(score)) == score);
    }
}

TEST_CASE("measure conservation per line") {
    std::mt19937_64 gen(7);
    for (int i = 0; i < 50; ++i) {
        Score score = testutil::random_score(gen);
        auto notes = assemble_notes(score);
        for (std::size_t li = 0; li < score.lines.size(); ++li) {
            int sum = 0;
            for (const Note& n : notes)
                if (n.start.line == static_cast<int>(li)) sum += n.duration_units;
            CHECK(sum == static_cast<int>(score.lines[li].size()) * kUnitsPerMeasure);
        }
    }
}

TEST_CASE("validator mutation property") {
    std::mt19937_64 gen(99);
    for (int i = 0; i < 25; ++i) {
        Score score = testutil::random_score(gen, /*distinct_adjacent=*/true, 2, 2);
        auto base = tokenize(serialize(score));
        REQUIRE(validate(base).valid());
        for (std::size_t k = 0; k < base.tokens.size(); ++k) {
            TokenizeResult dropped = base;
            dropped.tokens.erase(dropped.tokens.begin() + k);
            auto report = validate(dropped);
            CHECK_FALSE(report.valid());
            CHECK(report.has(ErrorCategory::IncompleteMeasure));

            if (is_onset(base.tokens[k].code)) {
                TokenizeResult swapped = base;
                swapped.tokens[k].code = continuation_for(swapped.tokens[k].code);
                auto r2 = validate(swapped);
                CHECK_FALSE(r2.valid());
                CHECK(r2.has(ErrorCategory::OrphanContinuation));
            }
        }
    }
}

TEST_CASE("serialize is bit-exact canonical form") {
    std::vector<Note> notes = {{0x3C, 32, {0, 0, 0}}, {0x40, 32, {1, 0, 0}},
                               {0x43, 32, {1, 0, 0}}};
    std::string text = serialize(emit_tokens(notes));
    CHECK(text.back() == '\n');
    CHECK(text.find("  ") == std::string::npos);
    CHECK(text.find(" | ") != std::string::npos);
    CHECK(text.find('\r') == std::string::npos);
}
