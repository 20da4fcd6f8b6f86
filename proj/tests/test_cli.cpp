#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "lingmix/alignment.hpp"
#include "lingmix/corpus_io.hpp"

using namespace lingmix;

namespace {

const std::string kCli = LINGMIX_CLI_PATH;

int run(const std::string& args) {
    std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    std::filesystem::path dir;
    explicit TempDir(const std::string& stem)
        : dir(std::filesystem::temp_directory_path() / stem) {
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
    }
    ~TempDir() { std::filesystem::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::set<std::string> candidate_ids(const std::string& annotated_path) {
    std::set<std::string> ids;
    for (const auto& doc : read_corpus_all({annotated_path}))
        if (doc.annotations && doc.annotations->label == BilingualLabel::Candidate)
            ids.insert(doc.doc_id);
    return ids;
}

}  // namespace

TEST_CASE("help and usage exit codes") {
    CHECK(run("--help") == 0);
    CHECK(run("detect --help") == 0);
    CHECK(run("definitely-not-a-subcommand") == 2);
    CHECK(run("detect") == 2);  // missing required options
}

TEST_CASE("missing inputs exit 2 with a diagnostic") {
    TempDir tmp("cli_missing");
    CHECK(run("detect --input " + tmp.path("absent.jsonl") + " --output " + tmp.path("o")) == 2);
    CHECK(run("synth --output " + tmp.path("c.jsonl") + " --docs 50 --seed 1") == 0);
    CHECK(run("detect --input " + tmp.path("c.jsonl") + " --output " + tmp.path("o") +
              " --model " + tmp.path("no_such.model")) == 2);
}

TEST_CASE("end-to-end pipeline with determinism across reruns and workers") {
    TempDir tmp("cli_pipeline");
    REQUIRE(run("synth --output " + tmp.path("c.jsonl") + " --docs 400 --seed 7") == 0);
    REQUIRE(run("synth --output " + tmp.path("c2.jsonl") + " --docs 400 --seed 7") == 0);
    CHECK(slurp(tmp.path("c.jsonl")) == slurp(tmp.path("c2.jsonl")));

    REQUIRE(run("detect --input " + tmp.path("c.jsonl") + " --output " + tmp.path("a1.jsonl") +
                " --workers 1") == 0);
    REQUIRE(run("detect --input " + tmp.path("c.jsonl") + " --output " + tmp.path("a4.jsonl") +
                " --workers 4") == 0);
    CHECK(slurp(tmp.path("a1.jsonl")) == slurp(tmp.path("a4.jsonl")));

    REQUIRE(run("classify --input " + tmp.path("a1.jsonl") + " --output " + tmp.path("f1.jsonl") +
                " --workers 1") == 0);
    REQUIRE(run("classify --input " + tmp.path("a1.jsonl") + " --output " + tmp.path("f4.jsonl") +
                " --workers 4") == 0);
    CHECK(slurp(tmp.path("f1.jsonl")) == slurp(tmp.path("f4.jsonl")));

    CHECK(run("split --input " + tmp.path("f1.jsonl") + " --outdir " + tmp.path("splits")) == 0);
    for (const char* split : {"fineweb", "monoweb", "monoweb_parallel", "monoweb_codeswitch"})
        CHECK(std::filesystem::exists(tmp.path("splits/" + std::string(split) + ".jsonl")));

    CHECK(run("stats --input " + tmp.path("f1.jsonl") + " --output " + tmp.path("stats.txt")) == 0);
    CHECK_FALSE(slurp(tmp.path("stats.txt")).empty());
}

TEST_CASE("raising tau shrinks the candidate set") {
    TempDir tmp("cli_tau");
    REQUIRE(run("synth --output " + tmp.path("c.jsonl") + " --docs 500 --seed 13") == 0);
    REQUIRE(run("detect --input " + tmp.path("c.jsonl") + " --output " + tmp.path("t01.jsonl") +
                " --tau 0.1") == 0);
    REQUIRE(run("detect --input " + tmp.path("c.jsonl") + " --output " + tmp.path("t02.jsonl") +
                " --tau 0.2") == 0);
    auto loose = candidate_ids(tmp.path("t01.jsonl"));
    auto strict = candidate_ids(tmp.path("t02.jsonl"));
    for (const auto& id : strict) CHECK(loose.count(id) == 1);
    CHECK(strict.size() <= loose.size());
}

TEST_CASE("run report echoes the configuration") {
    TempDir tmp("cli_report");
    REQUIRE(run("synth --output " + tmp.path("c.jsonl") + " --docs 100 --seed 3") == 0);
    REQUIRE(run("detect --input " + tmp.path("c.jsonl") + " --output " + tmp.path("a.jsonl") +
                " --tau 0.15 --report " + tmp.path("r.json")) == 0);
    auto report = nlohmann::json::parse(slurp(tmp.path("r.json")));
    CHECK(report["command"] == "detect");
    CHECK(report["tau"] == 0.15);
    CHECK(report["pair"] == "en-fr");
    CHECK(report["summary"]["doc_count"] == 100);
}

TEST_CASE("genlang subcommand reports the synthetic rates") {
    TempDir tmp("cli_genlang");
    REQUIRE(run("synth --kind outputs --output " + tmp.path("o.jsonl") +
                " --docs 200 --seed 3 --target-rate 0.45 --mixed-rate 0.05") == 0);
    REQUIRE(run("genlang --input " + tmp.path("o.jsonl") + " --format machine --output " +
                tmp.path("g.json")) == 0);
    auto report = nlohmann::json::parse(slurp(tmp.path("g.json")));
    CHECK(report["sample_count"] == 200);
    double target = report["rates"]["target"].get<double>();
    CHECK(target == doctest::Approx(0.45).epsilon(0.05));
}

TEST_CASE("align subcommand produces a layer table") {
    TempDir tmp("cli_align");
    EmbeddingMatrix m;
    m.rows = 5;
    m.cols = 3;
    m.layer = 6;
    for (int i = 0; i < 5; ++i) {
        m.ids.push_back("s" + std::to_string(i));
        for (int k = 0; k < 3; ++k) m.values.push_back(i == k ? 1.0 : 0.1 * i + 0.01 * k);
    }
    save_embeddings(m, tmp.path("src.emb"));
    save_embeddings(m, tmp.path("tgt.emb"));
    REQUIRE(run("align --src " + tmp.path("src.emb") + " --tgt " + tmp.path("tgt.emb") +
                " --format machine --output " + tmp.path("a.json")) == 0);
    auto report = nlohmann::json::parse(slurp(tmp.path("a.json")));
    REQUIRE(report["layers"].size() == 1);
    CHECK(report["layers"][0]["layer"] == 6);
    CHECK(report["layers"][0]["p_at_1_mean"] == 1.0);
}

TEST_CASE("config file supplies defaults that flags can override") {
    TempDir tmp("cli_config");
    REQUIRE(run("synth --output " + tmp.path("c.jsonl") + " --docs 100 --seed 3") == 0);
    {
        std::ofstream out(tmp.path("lingmix.toml"));
        out << "[detect]\ntau = 0.15\n";
    }
    REQUIRE(run("--config " + tmp.path("lingmix.toml") + " detect --input " + tmp.path("c.jsonl") +
                " --output " + tmp.path("a.jsonl") + " --report " + tmp.path("r.json")) == 0);
    auto report = nlohmann::json::parse(slurp(tmp.path("r.json")));
    CHECK(report["tau"] == 0.15);
}
