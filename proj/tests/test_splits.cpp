#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "lingmix/corpus_io.hpp"
#include "lingmix/splits.hpp"

using namespace lingmix;

namespace {

Document labeled_doc(const std::string& id, BilingualLabel label, const std::string& text = "w x y") {
    Document d;
    d.doc_id = id;
    d.text = text;
    d.annotations = AnnotationBlock{};
    d.annotations->label = label;
    return d;
}

std::vector<Document> mixed_corpus() {
    std::vector<Document> docs;
    int n = 0;
    auto add = [&](BilingualLabel label, int count) {
        for (int i = 0; i < count; ++i)
            docs.push_back(labeled_doc("d" + std::to_string(n++), label));
    };
    add(BilingualLabel::Monolingual, 60);
    add(BilingualLabel::Parallel, 3);
    add(BilingualLabel::CodeSwitching, 15);
    add(BilingualLabel::Miscellaneous, 3);
    add(BilingualLabel::OutOfPair, 19);
    return docs;
}

struct SplitRun {
    std::map<std::string, SplitSummary> summaries;
    std::map<std::string, std::string> paths;
    std::filesystem::path dir;

    ~SplitRun() { std::filesystem::remove_all(dir); }
};

SplitRun run_splits(const std::vector<Document>& docs, const std::string& stem,
                    bool drop_out_of_pair = false) {
    SplitRun run;
    run.dir = std::filesystem::temp_directory_path() / stem;
    std::filesystem::create_directories(run.dir);
    for (const std::string& name : SplitSpec::all_names()) {
        std::string path = (run.dir / (name + ".jsonl")).string();
        run.summaries[name] = build_split(docs, SplitSpec::by_name(name, drop_out_of_pair), path);
        run.paths[name] = path;
    }
    return run;
}

}  // namespace

TEST_CASE("split label sets act as pure filters") {
    auto docs = mixed_corpus();
    auto run = run_splits(docs, "splits_filter");

    // OutOfPair rides along with the monolingual remainder by default.
    CHECK(run.summaries["monoweb"].doc_count == 60 + 19);
    CHECK(run.summaries["monoweb_parallel"].doc_count == 60 + 19 + 3);
    CHECK(run.summaries["monoweb_codeswitch"].doc_count == 60 + 19 + 15);
    CHECK(run.summaries["fineweb"].doc_count == 100);

    auto monoweb = read_corpus_all({run.paths["monoweb"]});
    for (const auto& d : monoweb) {
        REQUIRE(d.annotations.has_value());
        bool mono_side = d.annotations->label == BilingualLabel::Monolingual ||
                         d.annotations->label == BilingualLabel::OutOfPair;
        CHECK(mono_side);
    }
}

TEST_CASE("drop_out_of_pair restricts monoweb to Monolingual only") {
    auto docs = mixed_corpus();
    auto run = run_splits(docs, "splits_drop", /*drop_out_of_pair=*/true);
    CHECK(run.summaries["monoweb"].doc_count == 60);
    CHECK(run.summaries["fineweb"].doc_count == 81);
}

TEST_CASE("fineweb passthrough preserves document order and ids") {
    auto docs = mixed_corpus();
    auto run = run_splits(docs, "splits_pass");
    auto fineweb = read_corpus_all({run.paths["fineweb"]});
    REQUIRE(fineweb.size() == docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) CHECK(fineweb[i].doc_id == docs[i].doc_id);
}

TEST_CASE("split algebra passes on a consistent corpus") {
    auto docs = mixed_corpus();
    auto run = run_splits(docs, "splits_ok");
    auto labels = LabelCounts::tally(docs);
    auto algebra = verify_split_algebra(run.summaries, labels);
    CHECK(algebra.ok);
    CHECK(algebra.violations.empty());
    auto files = verify_split_files(run.paths, docs);
    CHECK(files.ok);
}

TEST_CASE("algebra failure reports the discrepancy") {
    auto docs = mixed_corpus();
    auto run = run_splits(docs, "splits_bad");
    run.summaries["monoweb_parallel"].doc_count += 1;  // simulated double inclusion
    auto algebra = verify_split_algebra(run.summaries, LabelCounts::tally(docs));
    CHECK_FALSE(algebra.ok);
    REQUIRE(algebra.violations.size() == 1);
    CHECK(algebra.violations[0].find("monoweb_parallel") != std::string::npos);
}

TEST_CASE("double-included document is named at file level") {
    auto docs = mixed_corpus();
    auto run = run_splits(docs, "splits_dup");
    // Append a duplicate of a parallel doc to monoweb_parallel.
    auto parallel_doc = labeled_doc("d60", BilingualLabel::Parallel);
    {
        auto existing = read_corpus_all({run.paths["monoweb_parallel"]});
        existing.push_back(parallel_doc);
        write_corpus_all(existing, run.paths["monoweb_parallel"]);
    }
    auto files = verify_split_files(run.paths, docs);
    CHECK_FALSE(files.ok);
    bool named = false;
    for (const auto& v : files.violations)
        if (v.find("d60") != std::string::npos) named = true;
    CHECK(named);
}

TEST_CASE("empty corpus passes with zeros") {
    std::vector<Document> docs;
    auto run = run_splits(docs, "splits_empty");
    auto algebra = verify_split_algebra(run.summaries, LabelCounts::tally(docs));
    CHECK(algebra.ok);
    CHECK(run.summaries["fineweb"].doc_count == 0);
    CHECK(run.summaries["fineweb"].token_count == 0);
}

TEST_CASE("raw Candidate labels are rejected") {
    std::vector<Document> docs{labeled_doc("c0", BilingualLabel::Candidate)};
    auto path = (std::filesystem::temp_directory_path() / "splits_cand.jsonl").string();
    CHECK_THROWS(build_split(docs, SplitSpec::by_name("fineweb"), path));
    std::remove(path.c_str());
}

TEST_CASE("unresolved candidates stay in fineweb only") {
    std::vector<Document> docs = {labeled_doc("m", BilingualLabel::Monolingual),
                                  labeled_doc("u", BilingualLabel::CandidateUnresolved)};
    auto run = run_splits(docs, "splits_unres");
    CHECK(run.summaries["fineweb"].doc_count == 2);
    CHECK(run.summaries["monoweb"].doc_count == 1);
    CHECK(run.summaries["monoweb_parallel"].doc_count == 1);
    auto algebra = verify_split_algebra(run.summaries, LabelCounts::tally(docs));
    CHECK(algebra.ok);
}
