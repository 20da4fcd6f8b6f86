#include <map>

#include "doctest.h"
#include "lingmix/document.hpp"
#include "lingmix/synth.hpp"

using namespace lingmix;

TEST_CASE("fixed seed reproduces the corpus byte for byte") {
    SynthConfig config;
    config.seed = 1234;
    config.doc_count = 200;
    auto a = synth_corpus(config);
    auto b = synth_corpus(config);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(document_to_line(a[i]) == document_to_line(b[i]));
}

TEST_CASE("different seeds give different corpora") {
    SynthConfig config;
    config.doc_count = 50;
    config.seed = 1;
    auto a = synth_corpus(config);
    config.seed = 2;
    auto b = synth_corpus(config);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].text != b[i].text) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("planted counts are exact") {
    SynthConfig config;
    config.seed = 5;
    config.doc_count = 1000;  // 2% bilingual at 14/72/14
    auto docs = synth_corpus(config);
    REQUIRE(docs.size() == 1000);
    std::map<std::string, int> counts;
    for (const auto& d : docs) ++counts[d.extra.value("planted", "?")];
    CHECK(counts["monolingual"] == 980);
    CHECK(counts["parallel"] == 3);  // round(20 * 0.14)
    CHECK(counts["code_switching"] == 14);
    CHECK(counts["miscellaneous"] == 3);
    CHECK(counts.count("?") == 0);
}

TEST_CASE("rate zero gives a purely monolingual corpus") {
    SynthConfig config;
    config.doc_count = 100;
    config.bilingual_rate = 0.0;
    for (const auto& d : synth_corpus(config))
        CHECK(d.extra.value("planted", "") == "monolingual");
}

TEST_CASE("documents carry unique ids and urls") {
    SynthConfig config;
    config.doc_count = 300;
    auto docs = synth_corpus(config);
    std::map<std::string, int> ids;
    for (const auto& d : docs) {
        ++ids[d.doc_id];
        CHECK(d.url.has_value());
        CHECK(!d.text.empty());
    }
    for (const auto& [id, count] : ids) CHECK(count == 1);
}

TEST_CASE("builtin training corpora are deterministic and sizeable") {
    for (const auto& lang : builtin_languages()) {
        auto a = builtin_training_corpus(lang);
        CHECK(a == builtin_training_corpus(lang));
        CHECK(a.size() > 10000);
    }
}

TEST_CASE("synthetic outputs mix matches the requested rates exactly") {
    auto outputs = synth_outputs(9, 200, LanguagePair{"en", "fr"}, 0.45, 0.05);
    REQUIRE(outputs.size() == 200);
    auto again = synth_outputs(9, 200, LanguagePair{"en", "fr"}, 0.45, 0.05);
    CHECK(outputs == again);
    for (const auto& [source, generated] : outputs) {
        CHECK(!source.empty());
        CHECK(!generated.empty());
    }
}
