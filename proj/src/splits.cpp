#include "lingmix/splits.hpp"

#include <stdexcept>

#include "lingmix/corpus_io.hpp"
#include "lingmix/segmenter.hpp"

namespace lingmix {

namespace {

BilingualLabel effective_label(const Document& doc) {
    return doc.annotations ? doc.annotations->label : BilingualLabel::Monolingual;
}

}  // namespace

SplitSpec SplitSpec::by_name(const std::string& name, bool drop_out_of_pair) {
    SplitSpec spec;
    spec.name = name;
    std::set<BilingualLabel> base = {BilingualLabel::Monolingual};
    if (!drop_out_of_pair) base.insert(BilingualLabel::OutOfPair);
    if (name == "fineweb") {
        spec.included_labels = {BilingualLabel::Monolingual, BilingualLabel::Parallel,
                                BilingualLabel::CodeSwitching, BilingualLabel::Miscellaneous,
                                BilingualLabel::CandidateUnresolved};
        if (!drop_out_of_pair) spec.included_labels.insert(BilingualLabel::OutOfPair);
    } else if (name == "monoweb") {
        spec.included_labels = base;
    } else if (name == "monoweb_parallel") {
        spec.included_labels = base;
        spec.included_labels.insert(BilingualLabel::Parallel);
    } else if (name == "monoweb_codeswitch") {
        spec.included_labels = base;
        spec.included_labels.insert(BilingualLabel::CodeSwitching);
    } else {
        throw std::runtime_error("unknown split name: " + name);
    }
    return spec;
}

std::vector<std::string> SplitSpec::all_names() {
    return {"fineweb", "monoweb", "monoweb_parallel", "monoweb_codeswitch"};
}

SplitSummary build_split(const std::vector<Document>& corpus, const SplitSpec& spec,
                         const std::string& out_path, bool strip_annotations) {
    SplitSummary summary;
    summary.name = spec.name;
    CorpusWriter writer(out_path, !strip_annotations);
    for (const Document& doc : corpus) {
        BilingualLabel label = effective_label(doc);
        if (label == BilingualLabel::Candidate)
            throw std::runtime_error("document \"" + doc.doc_id +
                                     "\" still carries a raw Candidate label; run stage 2 first");
        if (!spec.included_labels.count(label)) continue;
        writer.write(doc);
        ++summary.doc_count;
        summary.token_count += count_word_tokens(doc.text);
    }
    writer.finish();
    return summary;
}

LabelCounts LabelCounts::tally(const std::vector<Document>& corpus) {
    LabelCounts out;
    for (const Document& doc : corpus) {
        ++out.counts[effective_label(doc)];
        ++out.total;
    }
    return out;
}

SplitAlgebraReport verify_split_algebra(const std::map<std::string, SplitSummary>& summaries,
                                        const LabelCounts& labels) {
    SplitAlgebraReport report;
    auto get = [&](const std::string& name) -> const SplitSummary& {
        auto it = summaries.find(name);
        if (it == summaries.end())
            throw std::runtime_error("missing split summary: " + name);
        return it->second;
    };
    auto count = [&](BilingualLabel label) {
        auto it = labels.counts.find(label);
        return it == labels.counts.end() ? std::int64_t{0} : it->second;
    };

    const auto& fineweb = get("fineweb");
    const auto& monoweb = get("monoweb");
    const auto& mono_par = get("monoweb_parallel");
    const auto& mono_cs = get("monoweb_codeswitch");

    const std::int64_t parallel = count(BilingualLabel::Parallel);
    const std::int64_t cs = count(BilingualLabel::CodeSwitching);
    const std::int64_t misc = count(BilingualLabel::Miscellaneous);
    const std::int64_t unresolved = count(BilingualLabel::CandidateUnresolved);

    if (fineweb.doc_count != monoweb.doc_count + parallel + cs + misc + unresolved)
        report.violations.push_back(
            "|fineweb| != |monoweb| + categories + unresolved (" +
            std::to_string(fineweb.doc_count) + " vs " +
            std::to_string(monoweb.doc_count + parallel + cs + misc + unresolved) + ")");
    if (mono_par.doc_count != monoweb.doc_count + parallel)
        report.violations.push_back("|monoweb_parallel| != |monoweb| + |Parallel|");
    if (mono_cs.doc_count != monoweb.doc_count + cs)
        report.violations.push_back("|monoweb_codeswitch| != |monoweb| + |CodeSwitching|");
    if (fineweb.doc_count > labels.total)
        report.violations.push_back("fineweb larger than the labeled corpus");

    report.ok = report.violations.empty();
    return report;
}

SplitAlgebraReport verify_split_files(const std::map<std::string, std::string>& split_paths,
                                      const std::vector<Document>& corpus) {
    SplitAlgebraReport report;

    std::map<std::string, std::set<std::string>> split_ids;
    for (const auto& [name, path] : split_paths) {
        std::vector<RecordError> errors;
        auto docs = read_corpus_all({path}, &errors);
        for (const RecordError& e : errors)
            report.violations.push_back(name + ": malformed record at line " +
                                        std::to_string(e.line_number));
        auto& ids = split_ids[name];
        for (const Document& doc : docs)
            if (!ids.insert(doc.doc_id).second)
                report.violations.push_back(name + ": document \"" + doc.doc_id +
                                            "\" included more than once");
    }

    std::map<BilingualLabel, std::set<std::string>> by_label;
    for (const Document& doc : corpus)
        by_label[effective_label(doc)].insert(doc.doc_id);

    auto check_union = [&](const std::string& augmented, BilingualLabel extra) {
        if (!split_ids.count(augmented) || !split_ids.count("monoweb")) return;
        std::set<std::string> expected = split_ids["monoweb"];
        for (const std::string& id : by_label[extra]) expected.insert(id);
        for (const std::string& id : split_ids[augmented])
            if (!expected.count(id))
                report.violations.push_back(augmented + ": unexpected document \"" + id + "\"");
        for (const std::string& id : expected)
            if (!split_ids[augmented].count(id))
                report.violations.push_back(augmented + ": missing document \"" + id + "\"");
    };
    check_union("monoweb_parallel", BilingualLabel::Parallel);
    check_union("monoweb_codeswitch", BilingualLabel::CodeSwitching);

    report.ok = report.violations.empty();
    return report;
}

}  // namespace lingmix
