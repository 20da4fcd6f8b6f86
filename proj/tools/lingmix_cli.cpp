// lingmix: bilingual-document detection, classification, corpus splits,
// and measurement instruments, as subcommands over line-delimited corpora.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "lingmix/alignment.hpp"
#include "lingmix/analytics.hpp"
#include "lingmix/classifier.hpp"
#include "lingmix/corpus_io.hpp"
#include "lingmix/entropy_filter.hpp"
#include "lingmix/splits.hpp"
#include "lingmix/synth.hpp"

using namespace lingmix;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
    std::string pair_str = "en-fr";
    std::string model_path;
    int workers = 0;  // 0 -> hardware concurrency
    std::string format = "human";
    std::string report_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--pair", opts.pair_str, "Language pair, e.g. en-fr")->capture_default_str();
    cmd->add_option("--model", opts.model_path,
                    "Langid model file (default: built-in 4-language model)");
    cmd->add_option("--workers", opts.workers, "Worker threads (0 = hardware concurrency)");
    cmd->add_option("--format", opts.format, "Report format")
        ->check(CLI::IsMember({"human", "machine"}))
        ->capture_default_str();
    cmd->add_option("--report", opts.report_path, "Write a structured run report to this path");
}

LanguagePair parse_pair(const std::string& s) {
    auto pair = LanguagePair::parse(s);
    if (!pair) throw CLI::ValidationError("--pair", "expected two ISO 639-1 codes like en-fr");
    return *pair;
}

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

const LangIdModel& resolve_model(const std::string& path, std::optional<LangIdModel>& storage) {
    if (path.empty()) return bundled_model();
    storage = LangIdModel::load(path);
    return *storage;
}

void write_report(const std::string& path, const nlohmann::json& report) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write run report: " + path);
    out << report.dump(2) << "\n";
}

std::vector<Document> read_inputs(const std::vector<std::string>& inputs,
                                  std::vector<RecordError>* errors) {
    for (const std::string& path : inputs)
        if (!std::filesystem::exists(path))
            throw std::runtime_error("input file not found: " + path);
    return read_corpus_all(inputs, errors);
}

void report_record_errors(const std::vector<RecordError>& errors) {
    for (const RecordError& e : errors)
        std::cerr << "warning: " << e.shard << ":" << e.line_number << ": " << e.message << "\n";
}

nlohmann::json stage1_json(const Stage1Summary& s) {
    return {{"doc_count", s.doc_count},
            {"candidate_count", s.candidate_count},
            {"monolingual_count", s.monolingual_count},
            {"out_of_pair_count", s.out_of_pair_count},
            {"error_count", s.error_count},
            {"candidate_rate", s.candidate_rate()},
            {"monolingual_rate", s.monolingual_rate()},
            {"out_of_pair_rate", s.out_of_pair_rate()}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bilingual corpus filtering and measurement toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a TOML config file");
    app.allow_config_extras(CLI::config_extras_mode::ignore_all);

    // ---- detect ----
    auto* detect = app.add_subcommand("detect", "Stage 1: entropy-based candidate detection");
    CommonOpts detect_common;
    std::vector<std::string> detect_inputs;
    std::string detect_output;
    double detect_tau = 0.1, detect_min_pair_mass = 0.5;
    detect->add_option("--input", detect_inputs, "Input corpus shard(s)")->required();
    detect->add_option("--output", detect_output, "Annotated corpus output path")->required();
    detect->add_option("--tau", detect_tau, "Entropy threshold (nats, strict)")
        ->capture_default_str();
    detect->add_option("--min-pair-mass", detect_min_pair_mass,
                       "Minimum score mass on the pair before OutOfPair")
        ->capture_default_str();
    add_common(detect, detect_common);

    // ---- classify ----
    auto* classify = app.add_subcommand("classify", "Stage 2: verify and categorize candidates");
    CommonOpts classify_common;
    std::vector<std::string> classify_inputs;
    std::string classify_output;
    std::string classify_mode = "heuristic";
    std::string judge_endpoint, judge_model = "judge";
    std::string verify_prompt_path, classify_prompt_path;
    int judge_retries = 3;
    classify->add_option("--input", classify_inputs, "Stage-1 annotated corpus")->required();
    classify->add_option("--output", classify_output, "Classified corpus output path")->required();
    classify->add_option("--mode", classify_mode, "heuristic | remote | fallback")
        ->check(CLI::IsMember({"heuristic", "remote", "fallback"}))
        ->capture_default_str();
    classify
        ->add_option("--judge-endpoint", judge_endpoint,
                     "Judge URL (env LINGMIX_JUDGE_ENDPOINT)")
        ->envname("LINGMIX_JUDGE_ENDPOINT");
    classify->add_option("--judge-model", judge_model, "Judge model name")->capture_default_str();
    classify->add_option("--judge-retries", judge_retries, "Max judge retries")
        ->capture_default_str();
    classify->add_option("--verify-prompt", verify_prompt_path,
                         "File with the verify prompt template ({document} placeholder)");
    classify->add_option("--classify-prompt", classify_prompt_path,
                         "File with the classify prompt template ({document} placeholder)");
    add_common(classify, classify_common);

    // ---- split ----
    auto* split = app.add_subcommand("split", "Build the four corpus configurations");
    CommonOpts split_common;
    std::vector<std::string> split_inputs;
    std::string split_outdir;
    bool split_drop_oop = false, split_strip = false;
    split->add_option("--input", split_inputs, "Fully labeled corpus")->required();
    split->add_option("--outdir", split_outdir, "Directory for the four split files")->required();
    split->add_flag("--drop-out-of-pair", split_drop_oop,
                    "Exclude OutOfPair documents from every split");
    split->add_flag("--strip-annotations", split_strip, "Strip annotations in split outputs");
    add_common(split, split_common);

    // ---- stats ----
    auto* stats = app.add_subcommand("stats", "Composition and URL-domain reports");
    CommonOpts stats_common;
    std::vector<std::string> stats_inputs;
    std::string stats_output;
    int stats_top_k = 50;
    stats->add_option("--input", stats_inputs, "Labeled corpus")->required();
    stats->add_option("--output", stats_output, "Write reports here instead of stdout");
    stats->add_option("--top-k", stats_top_k, "Domains per category")->capture_default_str();
    add_common(stats, stats_common);

    // ---- genlang ----
    auto* genlang = app.add_subcommand("genlang", "Generation-language-rate report");
    CommonOpts genlang_common;
    std::vector<std::string> genlang_inputs;
    std::string genlang_output;
    double theta_target = 0.9, tau_mixed = 0.1;
    genlang->add_option("--input", genlang_inputs,
                        "JSONL with keys \"source\" and \"generated\"")->required();
    genlang->add_option("--output", genlang_output, "Write report here instead of stdout");
    genlang->add_option("--theta-target", theta_target, "Partner-mass bar for target-language")
        ->capture_default_str();
    genlang->add_option("--tau-mixed", tau_mixed, "Entropy bar for mixed-language")
        ->capture_default_str();
    add_common(genlang, genlang_common);

    // ---- align ----
    auto* align = app.add_subcommand("align", "Cosine P@1 alignment report");
    CommonOpts align_common;
    std::vector<std::string> align_src, align_tgt, align_base_src, align_base_tgt;
    std::string align_output;
    align->add_option("--src", align_src, "Source embedding file(s), one per layer")->required();
    align->add_option("--tgt", align_tgt, "Target embedding file(s), one per layer")->required();
    align->add_option("--baseline-src", align_base_src,
                      "Second run's source embeddings (adds a delta column)");
    align->add_option("--baseline-tgt", align_base_tgt, "Second run's target embeddings");
    align->add_option("--output", align_output, "Write report here instead of stdout");
    add_common(align, align_common);

    // ---- synth ----
    auto* synth = app.add_subcommand("synth", "Seeded synthetic corpora for testing");
    CommonOpts synth_common;
    std::string synth_output, synth_kind = "corpus";
    std::uint64_t synth_seed = 1;
    std::int64_t synth_docs = 1000;
    double synth_rate = 0.02, synth_p = 0.14, synth_cs = 0.72, synth_misc = 0.14;
    double synth_target_rate = 0.45, synth_mixed_rate = 0.05;
    synth->add_option("--output", synth_output, "Output path")->required();
    synth->add_option("--kind", synth_kind, "corpus | outputs")
        ->check(CLI::IsMember({"corpus", "outputs"}))
        ->capture_default_str();
    synth->add_option("--seed", synth_seed, "RNG seed")->capture_default_str();
    synth->add_option("--docs", synth_docs, "Document / sample count")->capture_default_str();
    synth->add_option("--bilingual-rate", synth_rate, "Planted bilingual fraction")
        ->capture_default_str();
    synth->add_option("--parallel-share", synth_p, "Parallel share of bilingual docs")
        ->capture_default_str();
    synth->add_option("--codeswitch-share", synth_cs, "Code-switching share")
        ->capture_default_str();
    synth->add_option("--misc-share", synth_misc, "Miscellaneous share")->capture_default_str();
    synth->add_option("--target-rate", synth_target_rate, "outputs: target-language fraction")
        ->capture_default_str();
    synth->add_option("--mixed-rate", synth_mixed_rate, "outputs: mixed-language fraction")
        ->capture_default_str();
    add_common(synth, synth_common);

    // ---- train ----
    auto* train = app.add_subcommand("train", "Train / export a langid model");
    std::vector<std::string> train_corpora;
    std::string train_output;
    std::size_t train_vocab_cap = 20000;
    train->add_option("--corpus", train_corpora,
                      "lang=path training text (omit to export the built-in model)");
    train->add_option("--output", train_output, "Model output path")->required();
    train->add_option("--vocab-cap", train_vocab_cap, "Most-frequent n-grams kept per language")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*detect) {
            LanguagePair pair = parse_pair(detect_common.pair_str);
            std::optional<LangIdModel> storage;
            const LangIdModel& model = resolve_model(detect_common.model_path, storage);
            FilterConfig config;
            config.tau = detect_tau;
            config.min_pair_mass = detect_min_pair_mass;

            std::vector<RecordError> errors;
            auto docs = read_inputs(detect_inputs, &errors);
            report_record_errors(errors);
            Stage1Summary summary =
                run_stage1(docs, pair, model, config, resolve_workers(detect_common.workers));
            summary.error_count += static_cast<std::int64_t>(errors.size());
            write_corpus_all(docs, detect_output);

            nlohmann::json report = {{"command", "detect"},
                                     {"pair", pair.to_string()},
                                     {"tau", config.tau},
                                     {"min_pair_mass", config.min_pair_mass},
                                     {"input", detect_inputs},
                                     {"output", detect_output},
                                     {"summary", stage1_json(summary)}};
            write_report(detect_common.report_path, report);
            if (detect_common.format == "machine") std::cout << report.dump(2) << "\n";
            else
                std::cerr << "detect: " << summary.doc_count << " docs, "
                          << summary.candidate_count << " candidates ("
                          << 100.0 * summary.candidate_rate() << "%)\n";
            return kExitOk;
        }

        if (*classify) {
            LanguagePair pair = parse_pair(classify_common.pair_str);
            std::optional<LangIdModel> storage;
            const LangIdModel& model = resolve_model(classify_common.model_path, storage);
            ClassifierConfig config;

            Stage2Mode mode = Stage2Mode::Heuristic;
            std::optional<JudgeConfig> judge;
            if (classify_mode != "heuristic") {
                mode = classify_mode == "remote" ? Stage2Mode::Remote
                                                 : Stage2Mode::RemoteWithHeuristicFallback;
                JudgeConfig jc = JudgeConfig::with_default_prompts();
                if (judge_endpoint.empty())
                    throw std::runtime_error(
                        "remote modes need --judge-endpoint or LINGMIX_JUDGE_ENDPOINT");
                jc.endpoint_url = judge_endpoint;
                jc.model_name = judge_model;
                jc.max_retries = judge_retries;
                auto load_template = [](const std::string& path) {
                    std::ifstream in(path);
                    if (!in) throw std::runtime_error("cannot open prompt template: " + path);
                    std::ostringstream ss;
                    ss << in.rdbuf();
                    return ss.str();
                };
                if (!verify_prompt_path.empty())
                    jc.verify_prompt_template = load_template(verify_prompt_path);
                if (!classify_prompt_path.empty())
                    jc.classify_prompt_template = load_template(classify_prompt_path);
                if (!jc.templates_valid())
                    throw std::runtime_error(
                        "judge prompt templates must contain {document} exactly once");
                judge = jc;
            }

            std::vector<RecordError> errors;
            auto docs = read_inputs(classify_inputs, &errors);
            report_record_errors(errors);
            Stage2Summary summary = run_stage2(docs, pair, model, mode, config, judge,
                                               resolve_workers(classify_common.workers));
            write_corpus_all(docs, classify_output);

            nlohmann::json report = {{"command", "classify"},
                                     {"pair", pair.to_string()},
                                     {"mode", classify_mode},
                                     {"input", classify_inputs},
                                     {"output", classify_output},
                                     {"summary",
                                      {{"candidates", summary.candidates},
                                       {"reverted_monolingual", summary.reverted_monolingual},
                                       {"parallel", summary.parallel},
                                       {"code_switching", summary.code_switching},
                                       {"miscellaneous", summary.miscellaneous},
                                       {"unresolved", summary.unresolved}}}};
            write_report(classify_common.report_path, report);
            if (classify_common.format == "machine") std::cout << report.dump(2) << "\n";
            else
                std::cerr << "classify: " << summary.candidates << " candidates -> "
                          << summary.parallel << " parallel, " << summary.code_switching
                          << " code-switching, " << summary.miscellaneous << " miscellaneous, "
                          << summary.reverted_monolingual << " reverted, " << summary.unresolved
                          << " unresolved\n";
            return kExitOk;
        }

        if (*split) {
            std::vector<RecordError> errors;
            auto docs = read_inputs(split_inputs, &errors);
            report_record_errors(errors);
            std::filesystem::create_directories(split_outdir);

            std::map<std::string, SplitSummary> summaries;
            std::map<std::string, std::string> paths;
            for (const std::string& name : SplitSpec::all_names()) {
                SplitSpec spec = SplitSpec::by_name(name, split_drop_oop);
                std::string out_path = split_outdir + "/" + name + ".jsonl";
                summaries[name] = build_split(docs, spec, out_path, split_strip);
                paths[name] = out_path;
            }
            LabelCounts labels = LabelCounts::tally(docs);
            SplitAlgebraReport algebra = verify_split_algebra(summaries, labels);
            SplitAlgebraReport files = verify_split_files(paths, docs);

            nlohmann::json report = {{"command", "split"},
                                     {"input", split_inputs},
                                     {"outdir", split_outdir},
                                     {"algebra_ok", algebra.ok && files.ok}};
            for (const auto& [name, summary] : summaries)
                report["splits"][name] = {{"doc_count", summary.doc_count},
                                          {"token_count", summary.token_count}};
            nlohmann::json violations = nlohmann::json::array();
            for (const auto& v : algebra.violations) violations.push_back(v);
            for (const auto& v : files.violations) violations.push_back(v);
            report["violations"] = violations;
            write_report(split_common.report_path, report);
            if (split_common.format == "machine") std::cout << report.dump(2) << "\n";
            for (const auto& v : algebra.violations) std::cerr << "algebra: " << v << "\n";
            for (const auto& v : files.violations) std::cerr << "algebra: " << v << "\n";
            if (!(algebra.ok && files.ok)) return kExitCheckFailed;
            std::cerr << "split: algebra ok (" << labels.total << " docs)\n";
            return kExitOk;
        }

        if (*stats) {
            LanguagePair pair = parse_pair(stats_common.pair_str);
            std::vector<RecordError> errors;
            auto docs = read_inputs(stats_inputs, &errors);
            report_record_errors(errors);

            CompositionReport comp = composition_report(docs, pair);
            DomainReport domains = domain_report(docs, stats_top_k);
            const bool machine = stats_common.format == "machine";
            std::string rendered = render_composition(comp, machine) + render_domains(domains, machine);
            if (stats_output.empty()) {
                std::cout << rendered;
            } else {
                std::ofstream out(stats_output, std::ios::trunc);
                if (!out) throw std::runtime_error("cannot write: " + stats_output);
                out << rendered;
            }
            nlohmann::json report = {{"command", "stats"},
                                     {"pair", pair.to_string()},
                                     {"input", stats_inputs},
                                     {"total_bilingual_share", comp.total_bilingual_share}};
            write_report(stats_common.report_path, report);
            return kExitOk;
        }

        if (*genlang) {
            LanguagePair pair = parse_pair(genlang_common.pair_str);
            std::optional<LangIdModel> storage;
            const LangIdModel& model = resolve_model(genlang_common.model_path, storage);
            GenLangThresholds thresholds{theta_target, tau_mixed};

            std::vector<std::pair<std::string, std::string>> outputs;
            for (const std::string& path : genlang_inputs) {
                std::ifstream in(path);
                if (!in) throw std::runtime_error("cannot open: " + path);
                std::string line;
                std::int64_t line_no = 0;
                while (std::getline(in, line)) {
                    ++line_no;
                    if (line.empty()) continue;
                    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
                    if (j.is_discarded() || !j.contains("generated")) {
                        std::cerr << "warning: " << path << ":" << line_no
                                  << ": malformed output record\n";
                        continue;
                    }
                    outputs.emplace_back(j.value("source", ""), j["generated"].get<std::string>());
                }
            }
            GenLangReport report = gen_lang_rate(outputs, pair, model, thresholds);
            std::string rendered = render_gen_lang(report, genlang_common.format == "machine");
            if (genlang_output.empty()) {
                std::cout << rendered;
            } else {
                std::ofstream out(genlang_output, std::ios::trunc);
                if (!out) throw std::runtime_error("cannot write: " + genlang_output);
                out << rendered;
            }
            nlohmann::json jr = {{"command", "genlang"},
                                 {"pair", pair.to_string()},
                                 {"sample_count", report.sample_count},
                                 {"rates",
                                  {{"target", report.rates.at(GenLangClass::Target)},
                                   {"source", report.rates.at(GenLangClass::Source)},
                                   {"mixed", report.rates.at(GenLangClass::Mixed)}}}};
            write_report(genlang_common.report_path, jr);
            return kExitOk;
        }

        if (*align) {
            auto load_all = [](const std::vector<std::string>& paths) {
                std::vector<EmbeddingMatrix> out;
                for (const std::string& p : paths) out.push_back(load_embeddings(p));
                return out;
            };
            AlignmentReport report = layerwise_report(load_all(align_src), load_all(align_tgt));
            std::string rendered = render_alignment(report, align_common.format == "machine");
            if (!align_base_src.empty() || !align_base_tgt.empty()) {
                AlignmentReport base =
                    layerwise_report(load_all(align_base_src), load_all(align_base_tgt));
                if (base.layers.size() != report.layers.size())
                    throw std::runtime_error("baseline layer count differs from the main run");
                std::ostringstream delta;
                delta << "Delta vs baseline (mean P@1)\n";
                for (std::size_t i = 0; i < report.layers.size(); ++i) {
                    char buf[64];
                    std::snprintf(buf, sizeof(buf), "%5d  %+.4f\n", report.layers[i].layer,
                                  report.layers[i].p_at_1_mean - base.layers[i].p_at_1_mean);
                    delta << buf;
                }
                rendered += delta.str();
            }
            if (align_output.empty()) {
                std::cout << rendered;
            } else {
                std::ofstream out(align_output, std::ios::trunc);
                if (!out) throw std::runtime_error("cannot write: " + align_output);
                out << rendered;
            }
            nlohmann::json jr = {{"command", "align"}, {"layers", report.layers.size()}};
            write_report(align_common.report_path, jr);
            return kExitOk;
        }

        if (*synth) {
            LanguagePair pair = parse_pair(synth_common.pair_str);
            if (synth_kind == "corpus") {
                SynthConfig config;
                config.seed = synth_seed;
                config.doc_count = synth_docs;
                config.pair = pair;
                config.bilingual_rate = synth_rate;
                config.parallel_share = synth_p;
                config.code_switching_share = synth_cs;
                config.miscellaneous_share = synth_misc;
                auto docs = synth_corpus(config);
                WriteSummary ws = write_corpus_all(docs, synth_output);
                std::cerr << "synth: wrote " << ws.count << " docs (" << ws.bytes << " bytes)\n";
            } else {
                auto outputs =
                    synth_outputs(synth_seed, synth_docs, pair, synth_target_rate, synth_mixed_rate);
                std::ofstream out(synth_output, std::ios::trunc);
                if (!out) throw std::runtime_error("cannot write: " + synth_output);
                for (const auto& [source, generated] : outputs) {
                    nlohmann::json j = {{"source", source}, {"generated", generated}};
                    out << j.dump() << "\n";
                }
                std::cerr << "synth: wrote " << outputs.size() << " outputs\n";
            }
            nlohmann::json report = {{"command", "synth"},
                                     {"kind", synth_kind},
                                     {"seed", synth_seed},
                                     {"docs", synth_docs},
                                     {"output", synth_output}};
            write_report(synth_common.report_path, report);
            return kExitOk;
        }

        if (*train) {
            if (train_corpora.empty()) {
                bundled_model().save(train_output);
                std::cerr << "train: exported built-in model to " << train_output << "\n";
                return kExitOk;
            }
            std::vector<std::pair<std::string, std::string>> corpora;
            for (const std::string& spec : train_corpora) {
                auto eq = spec.find('=');
                if (eq == std::string::npos || eq == 0)
                    throw std::runtime_error("--corpus expects lang=path, got: " + spec);
                std::ifstream in(spec.substr(eq + 1), std::ios::binary);
                if (!in) throw std::runtime_error("cannot open corpus: " + spec.substr(eq + 1));
                std::ostringstream ss;
                ss << in.rdbuf();
                corpora.emplace_back(spec.substr(0, eq), ss.str());
            }
            LangIdModel model = LangIdModel::train(corpora, 1, 3, train_vocab_cap);
            model.save(train_output);
            std::cerr << "train: wrote model (" << model.table_size() << " n-grams) to "
                      << train_output << "\n";
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
