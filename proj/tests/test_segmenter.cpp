#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "lingmix/segmenter.hpp"

using namespace lingmix;

TEST_CASE("two terminal periods give two spans with token weights") {
    auto spans = segment("Hello world. Bonjour le monde.", default_segmenter_config());
    REQUIRE(spans.size() == 2);
    CHECK(spans[0].text == "Hello world.");
    CHECK(spans[0].length_weight == 2);
    CHECK(spans[1].text == "Bonjour le monde.");
    CHECK(spans[1].length_weight == 3);
    CHECK(spans[0].byte_begin == 0);
    CHECK(spans[1].byte_begin == 13);
}

TEST_CASE("abbreviations do not split") {
    auto spans = segment("Dr. Smith arrived.", default_segmenter_config());
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].text == "Dr. Smith arrived.");
    CHECK(spans[0].length_weight == 3);
}

TEST_CASE("empty text gives no spans") {
    CHECK(segment("", default_segmenter_config()).empty());
    CHECK(segment("   \n\t \n", default_segmenter_config()).empty());
}

TEST_CASE("single-letter initials do not split") {
    auto spans = segment("J. Smith met A. Jones today.", default_segmenter_config());
    REQUIRE(spans.size() == 1);
}

TEST_CASE("newlines are hard boundaries") {
    auto spans = segment("first line here\nsecond line here", default_segmenter_config());
    REQUIRE(spans.size() == 2);
    CHECK(spans[0].text == "first line here");
    CHECK(spans[1].text == "second line here");
}

TEST_CASE("terminator without following capital does not split") {
    auto spans = segment("version 2.5 of the tool works.", default_segmenter_config());
    REQUIRE(spans.size() == 1);
}

TEST_CASE("question and exclamation marks terminate") {
    auto spans = segment("Really? Yes! Fine.", default_segmenter_config());
    REQUIRE(spans.size() == 3);
}

TEST_CASE("max_span_tokens splits oversized runs at whitespace") {
    SegmenterConfig config = default_segmenter_config();
    config.max_span_tokens = 10;
    std::string text;
    for (int i = 0; i < 25; ++i) text += "word" + std::to_string(i) + " ";
    auto spans = segment(text, config);
    REQUIRE(spans.size() == 3);
    CHECK(spans[0].length_weight == 10);
    CHECK(spans[1].length_weight == 10);
    CHECK(spans[2].length_weight == 5);
    for (const auto& s : spans) CHECK(s.text.find("  ") == std::string::npos);
}

TEST_CASE("count_word_tokens handles punctuation and utf-8") {
    CHECK(count_word_tokens("") == 0);
    CHECK(count_word_tokens("one two three") == 3);
    CHECK(count_word_tokens("l'été, déjà là !") == 4);
    CHECK(count_word_tokens("10ft ceilings") == 2);
}

TEST_CASE("load_abbreviations parses one entry per line") {
    auto path = (std::filesystem::temp_directory_path() / "abbrev_test.txt").string();
    {
        std::ofstream out(path, std::ios::trunc);
        out << "# comment\nMr.\n  prof  \n\nz.b.\n";
    }
    auto abbrevs = load_abbreviations(path);
    CHECK(abbrevs.count("mr") == 1);
    CHECK(abbrevs.count("prof") == 1);
    CHECK(abbrevs.count("z.b") == 1);
    CHECK(abbrevs.size() == 3);
    std::remove(path.c_str());

    SegmenterConfig config;
    config.abbreviations = abbrevs;
    CHECK(segment("Mr. Smith left.", config).size() == 1);
}

TEST_CASE("bundled abbreviation files match the built-in defaults") {
    const auto& config = default_segmenter_config();
    for (const char* lang : {"en", "de", "es", "fr"}) {
        auto path = std::string(LINGMIX_DATA_DIR "/abbrev/") + lang + ".txt";
        REQUIRE_MESSAGE(std::filesystem::exists(path), "missing abbreviation file for ", lang);
        for (const auto& entry : load_abbreviations(path))
            CHECK_MESSAGE(config.abbreviations.count(entry) == 1, "not built in: ", entry);
    }
}

TEST_CASE("span offsets index back into the original text") {
    std::string text = "Alpha beta. Gamma delta? Epsilon.";
    auto spans = segment(text, default_segmenter_config());
    for (const auto& s : spans)
        CHECK(text.substr(s.byte_begin, s.byte_end - s.byte_begin) == s.text);
}
