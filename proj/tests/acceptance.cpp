// Acceptance gate: one line of output per criterion, nonzero exit if any
// criterion fails. Each check recomputes its expectation independently of
// the library code under test wherever the criterion calls for an oracle.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "lingmix/alignment.hpp"
#include "lingmix/analytics.hpp"
#include "lingmix/classifier.hpp"
#include "lingmix/corpus_io.hpp"
#include "lingmix/entropy_filter.hpp"
#include "lingmix/segmenter.hpp"
#include "lingmix/synth.hpp"

using namespace lingmix;
using Clock = std::chrono::steady_clock;

namespace {

const LanguagePair kPair{"en", "fr"};
int g_failures = 0;

void report(const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("%s  %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.empty() ? "" : " -- ",
                detail.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string temp(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("acc_" + name)).string();
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(LINGMIX_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --- 1. entropy oracle ------------------------------------------------

void check_entropy_oracle() {
    auto start = Clock::now();
    SynthConfig config;
    config.seed = 101;
    config.doc_count = 1000;
    config.bilingual_rate = 0.3;  // exercise the mixed-document path heavily
    auto docs = synth_corpus(config);

    const LangIdModel& model = bundled_model();
    const FilterConfig filter;
    const SegmenterConfig& seg = default_segmenter_config();
    int en = model.language_index("en");
    int fr = model.language_index("fr");

    double worst = 0;
    for (const auto& doc : docs) {
        DocLangProfile profile = profile_document(doc, kPair, model, filter, seg);

        // Independent aggregation: length-weighted language masses over the
        // pair, renormalized, entropy in nats, all in extended precision.
        long double m_en = 0, m_fr = 0, m_all = 0;
        for (const auto& span : segment(doc.text, seg)) {
            auto scores = model.score_sentence(span.text);
            long double w = static_cast<long double>(span.length_weight);
            m_en += w * scores.probs[en];
            m_fr += w * scores.probs[fr];
            for (float p : scores.probs) m_all += w * p;
        }
        long double p_en = 1.0L, p_fr = 0.0L, h = 0.0L;
        if (m_en + m_fr > 0) {
            p_en = m_en / (m_en + m_fr);
            p_fr = m_fr / (m_en + m_fr);
            if (p_en > 0) h -= p_en * std::log(p_en);
            if (p_fr > 0) h -= p_fr * std::log(p_fr);
        }
        worst = std::max(worst, std::fabs(profile.p_pivot - static_cast<double>(p_en)));
        worst = std::max(worst, std::fabs(profile.p_partner - static_cast<double>(p_fr)));
        worst = std::max(worst, std::fabs(profile.entropy - static_cast<double>(h)));
    }
    double elapsed = seconds_since(start);
    char detail[128];
    std::snprintf(detail, sizeof(detail), "max deviation %.2e, %.2fs", worst, elapsed);
    report("1 entropy oracle (1000 docs, 1e-9, <5s)", worst < 1e-9 && elapsed < 5.0, detail);
}

// --- 2. threshold semantics -------------------------------------------

void check_threshold_semantics() {
    FilterConfig config;
    DocLangProfile profile;
    profile.pair = kPair;
    profile.pair_mass = 1.0;
    profile.entropy = 0.1;
    bool ok = label_candidate(profile, config) == BilingualLabel::Monolingual;
    profile.entropy = 0.1 + 1e-6;
    ok = ok && label_candidate(profile, config) == BilingualLabel::Candidate;

    SynthConfig sc;
    sc.seed = 103;
    sc.doc_count = 1500;
    sc.bilingual_rate = 0.1;
    auto base = synth_corpus(sc);
    std::vector<std::set<std::string>> sets;
    for (double tau : {0.05, 0.1, 0.2}) {
        auto docs = base;
        FilterConfig fc;
        fc.tau = tau;
        run_stage1(docs, kPair, bundled_model(), fc, 4);
        std::set<std::string> ids;
        for (const auto& d : docs)
            if (d.annotations->label == BilingualLabel::Candidate) ids.insert(d.doc_id);
        sets.push_back(std::move(ids));
    }
    for (std::size_t i = 1; i < sets.size(); ++i)
        for (const auto& id : sets[i])
            if (!sets[i - 1].count(id)) ok = false;
    char detail[96];
    std::snprintf(detail, sizeof(detail), "candidates at tau 0.05/0.1/0.2: %zu/%zu/%zu",
                  sets[0].size(), sets[1].size(), sets[2].size());
    report("2 threshold semantics (strict, monotone in tau)", ok, detail);
}

// --- 3. planted-corpus reproduction -----------------------------------

void check_planted_corpus() {
    auto start = Clock::now();
    SynthConfig config;
    config.seed = 42;
    config.doc_count = 10000;
    auto docs = synth_corpus(config);

    run_stage1(docs, kPair, bundled_model(), FilterConfig{}, 4);

    std::int64_t planted_bilingual = 0, recalled = 0;
    for (const auto& d : docs) {
        std::string planted = d.extra.value("planted", "");
        if (planted == "monolingual") continue;
        ++planted_bilingual;
        if (d.annotations->label == BilingualLabel::Candidate) ++recalled;
    }
    double recall = planted_bilingual ? static_cast<double>(recalled) / planted_bilingual : 0;

    run_stage2(docs, kPair, bundled_model(), Stage2Mode::Heuristic, ClassifierConfig{},
               std::nullopt, 4);
    std::int64_t correct = 0;
    for (const auto& d : docs) {
        std::string planted = d.extra.value("planted", "");
        if (planted == "monolingual") continue;
        auto want = label_from_name(planted);
        if (want && d.annotations->label == *want) ++correct;
    }
    double accuracy = planted_bilingual ? static_cast<double>(correct) / planted_bilingual : 0;

    auto comp = composition_report(docs, kPair);
    bool comp_ok = std::fabs(comp.total_bilingual_share - 0.02) <= 0.01;
    auto share = [&](BilingualLabel label) {
        auto it = comp.category_shares.find(label);
        return it == comp.category_shares.end() ? 0.0 : it->second;
    };
    comp_ok = comp_ok && std::fabs(share(BilingualLabel::Parallel) - 0.14) <= 0.01 &&
              std::fabs(share(BilingualLabel::CodeSwitching) - 0.72) <= 0.01 &&
              std::fabs(share(BilingualLabel::Miscellaneous) - 0.14) <= 0.01;

    double elapsed = seconds_since(start);
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "recall %.3f, stage-2 accuracy %.3f, share %.4f (P/CS/M %.2f/%.2f/%.2f), %.1fs",
                  recall, accuracy, comp.total_bilingual_share, share(BilingualLabel::Parallel),
                  share(BilingualLabel::CodeSwitching), share(BilingualLabel::Miscellaneous),
                  elapsed);
    report("3 planted corpus (recall>=0.95, acc>=0.90, comp +-0.01, <60s)",
           recall >= 0.95 && accuracy >= 0.90 && comp_ok && elapsed < 60.0, detail);
}

// --- 4. split algebra via the CLI -------------------------------------

void check_split_algebra() {
    bool ok = true;
    for (unsigned seed : {11u, 12u, 13u}) {
        std::string stem = std::to_string(seed);
        std::string corpus = temp("s" + stem + ".jsonl");
        std::string annotated = temp("s" + stem + "_a.jsonl");
        std::string classified = temp("s" + stem + "_c.jsonl");
        std::string outdir = temp("s" + stem + "_splits");
        ok = ok &&
             run_cli("synth --output " + corpus + " --docs 1500 --seed " + stem +
                     " --bilingual-rate 0.03") == 0 &&
             run_cli("detect --input " + corpus + " --output " + annotated) == 0 &&
             run_cli("classify --input " + annotated + " --output " + classified) == 0 &&
             run_cli("split --input " + classified + " --outdir " + outdir) == 0;
        std::filesystem::remove(corpus);
        std::filesystem::remove(annotated);
        std::filesystem::remove(classified);
        std::filesystem::remove_all(outdir);
        if (!ok) break;
    }
    report("4 split algebra (cmd_split exit 0 on three seeded corpora)", ok);
}

// --- 5. P@1 correctness ------------------------------------------------

EmbeddingMatrix random_matrix(std::int64_t rows, std::int64_t cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    EmbeddingMatrix m;
    m.rows = rows;
    m.cols = cols;
    for (std::int64_t i = 0; i < rows; ++i) m.ids.push_back("r" + std::to_string(i));
    m.values.resize(static_cast<std::size_t>(rows * cols));
    for (double& v : m.values) v = gauss(rng);
    return m;
}

double oracle_p_at_1(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt) {
    auto cosine = [&](const double* a, const double* b) {
        double dot = 0, na = 0, nb = 0;
        for (std::int64_t k = 0; k < src.cols; ++k) {
            dot += a[k] * b[k];
            na += a[k] * a[k];
            nb += b[k] * b[k];
        }
        return (na == 0 || nb == 0) ? 0.0 : dot / (std::sqrt(na) * std::sqrt(nb));
    };
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < src.rows; ++i) {
        std::int64_t best = 0;
        double best_sim = -2;
        for (std::int64_t j = 0; j < tgt.rows; ++j) {
            double sim = cosine(src.row(i), tgt.row(j));
            if (sim > best_sim) {
                best_sim = sim;
                best = j;
            }
        }
        if (best == i) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(src.rows);
}

void check_p_at_1() {
    bool ok = true;
    std::string why;

    auto ident = random_matrix(30, 8, 500);
    if (p_at_1(ident, ident, RetrievalDirection::SrcToTgt) != 1.0) { ok = false; why = "identity"; }

    auto src2 = random_matrix(2, 4, 501);
    EmbeddingMatrix swapped = src2;
    for (int k = 0; k < 4; ++k) std::swap(swapped.values[k], swapped.values[4 + k]);
    if (p_at_1(src2, swapped, RetrievalDirection::SrcToTgt) != 0.0) { ok = false; why = "swap"; }

    std::mt19937_64 seeds(502);
    for (int iter = 0; iter < 20 && ok; ++iter) {
        std::int64_t n = 2 + static_cast<std::int64_t>(seeds() % 99);
        std::int64_t d = 1 + static_cast<std::int64_t>(seeds() % 24);
        auto a = random_matrix(n, d, seeds());
        auto b = random_matrix(n, d, seeds());
        if (p_at_1(a, b, RetrievalDirection::SrcToTgt) != oracle_p_at_1(a, b)) {
            ok = false;
            why = "oracle mismatch";
        }
    }

    auto a = random_matrix(40, 10, 503);
    auto b = random_matrix(40, 10, 504);
    double base = p_at_1(a, b, RetrievalDirection::SrcToTgt);
    EmbeddingMatrix scaled = a;
    for (std::int64_t i = 0; i < scaled.rows; ++i)
        for (std::int64_t k = 0; k < scaled.cols; ++k)
            scaled.values[i * scaled.cols + k] *= 1.0 + 0.5 * static_cast<double>(i % 5);
    if (std::fabs(p_at_1(scaled, b, RetrievalDirection::SrcToTgt) - base) > 1e-9) {
        ok = false;
        why = "scale invariance";
    }
    // Rotation by a Householder reflection (orthogonal, exact to build).
    std::vector<double> v(a.cols);
    {
        std::mt19937_64 rng(505);
        std::normal_distribution<double> gauss(0, 1);
        double norm = 0;
        for (double& x : v) { x = gauss(rng); norm += x * x; }
        norm = std::sqrt(norm);
        for (double& x : v) x /= norm;
    }
    auto reflect = [&](const EmbeddingMatrix& m) {
        EmbeddingMatrix out = m;
        for (std::int64_t i = 0; i < m.rows; ++i) {
            double dot = 0;
            for (std::int64_t k = 0; k < m.cols; ++k) dot += m.values[i * m.cols + k] * v[k];
            for (std::int64_t k = 0; k < m.cols; ++k)
                out.values[i * m.cols + k] = m.values[i * m.cols + k] - 2 * dot * v[k];
        }
        return out;
    };
    if (std::fabs(p_at_1(reflect(a), reflect(b), RetrievalDirection::SrcToTgt) - base) > 1e-9) {
        ok = false;
        why = "rotation invariance";
    }

    const std::int64_t n = 1000;
    auto gs = random_matrix(n, 16, 506);
    auto gt = random_matrix(n, 16, 507);
    double p = p_at_1(gs, gt, RetrievalDirection::SrcToTgt);
    double expect = 1.0 / static_cast<double>(n);
    double sigma = std::sqrt(expect * (1 - expect) / static_cast<double>(n));
    if (std::fabs(p - expect) > 3 * sigma) {
        ok = false;
        why = "chance level p=" + std::to_string(p);
    }
    report("5 P@1 (identity, swap, oracle, invariances, chance 3-sigma)", ok, why);
}

// --- 6. generation-language rate --------------------------------------

void check_gen_lang_rate() {
    auto outputs = synth_outputs(601, 1000, kPair, 0.45, 0.05);
    auto rep = gen_lang_rate(outputs, kPair, bundled_model(), GenLangThresholds{});
    double target = rep.rates.at(GenLangClass::Target);
    double source = rep.rates.at(GenLangClass::Source);
    double mixed = rep.rates.at(GenLangClass::Mixed);
    bool ok = std::fabs(target - 0.45) <= 0.02 && std::fabs(source - 0.50) <= 0.02 &&
              std::fabs(mixed - 0.05) <= 0.02;
    char detail[96];
    std::snprintf(detail, sizeof(detail), "target/source/mixed = %.3f/%.3f/%.3f", target, source,
                  mixed);
    report("6 generation-language rates (45/50/5 +-0.02)", ok, detail);
}

// --- 7. determinism ----------------------------------------------------

void check_determinism() {
    bool ok = true;
    std::string corpus = temp("det.jsonl"), corpus2 = temp("det2.jsonl");
    ok = ok && run_cli("synth --output " + corpus + " --docs 800 --seed 77") == 0;
    ok = ok && run_cli("synth --output " + corpus2 + " --docs 800 --seed 77") == 0;
    ok = ok && slurp(corpus) == slurp(corpus2);

    std::string a1 = temp("det_a1.jsonl"), a4 = temp("det_a4.jsonl");
    ok = ok && run_cli("detect --input " + corpus + " --output " + a1 + " --workers 1") == 0;
    ok = ok && run_cli("detect --input " + corpus + " --output " + a4 + " --workers 4") == 0;
    ok = ok && slurp(a1) == slurp(a4);

    std::string c1 = temp("det_c1.jsonl"), c4 = temp("det_c4.jsonl");
    ok = ok && run_cli("classify --input " + a1 + " --output " + c1 + " --workers 1") == 0;
    ok = ok && run_cli("classify --input " + a1 + " --output " + c4 + " --workers 4") == 0;
    ok = ok && slurp(c1) == slurp(c4);

    std::string o1 = temp("det_o1.jsonl"), o2 = temp("det_o2.jsonl");
    ok = ok && run_cli("synth --kind outputs --output " + o1 + " --docs 300 --seed 5") == 0;
    ok = ok && run_cli("synth --kind outputs --output " + o2 + " --docs 300 --seed 5") == 0;
    ok = ok && slurp(o1) == slurp(o2);

    for (const auto& f : {corpus, corpus2, a1, a4, c1, c4, o1, o2}) std::filesystem::remove(f);
    report("7 determinism (reruns and --workers 1 vs 4 byte-identical)", ok);
}

// --- 8. throughput ------------------------------------------------------

void check_throughput() {
    SynthConfig config;
    config.seed = 808;
    config.doc_count = 4000;
    auto docs = synth_corpus(config);
    std::int64_t bytes = 0;
    for (const auto& d : docs) bytes += static_cast<std::int64_t>(d.text.size());

    auto start = Clock::now();
    run_stage1(docs, kPair, bundled_model(), FilterConfig{}, /*workers=*/1);
    double elapsed = seconds_since(start);
    double mbps = static_cast<double>(bytes) / (1024.0 * 1024.0) / elapsed;
    char detail[64];
    std::snprintf(detail, sizeof(detail), "%.1f MB/s on one core", mbps);
    report("8 throughput (detection >= 20 MB/s per core)", mbps >= 20.0, detail);
}

}  // namespace

int main() {
    check_entropy_oracle();
    check_threshold_semantics();
    check_planted_corpus();
    check_split_algebra();
    check_p_at_1();
    check_gen_lang_rate();
    check_determinism();
    check_throughput();
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
