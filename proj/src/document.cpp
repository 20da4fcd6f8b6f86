#include "lingmix/document.hpp"

#include <array>
#include <utility>

namespace lingmix {

namespace {

constexpr std::array<std::pair<BilingualLabel, std::string_view>, 7> kLabelNames = {{
    {BilingualLabel::Monolingual, "monolingual"},
    {BilingualLabel::Candidate, "candidate"},
    {BilingualLabel::Parallel, "parallel"},
    {BilingualLabel::CodeSwitching, "code_switching"},
    {BilingualLabel::Miscellaneous, "miscellaneous"},
    {BilingualLabel::OutOfPair, "out_of_pair"},
    {BilingualLabel::CandidateUnresolved, "candidate_unresolved"},
}};

bool is_iso639_1(std::string_view code) {
    if (code.size() != 2) return false;
    for (char c : code)
        if (c < 'a' || c > 'z') return false;
    return true;
}

}  // namespace

std::string_view label_name(BilingualLabel label) {
    for (const auto& [l, n] : kLabelNames)
        if (l == label) return n;
    return "monolingual";
}

std::optional<BilingualLabel> label_from_name(std::string_view name) {
    for (const auto& [l, n] : kLabelNames)
        if (n == name) return l;
    return std::nullopt;
}

std::string_view classifier_source_name(ClassifierSource src) {
    return src == ClassifierSource::Heuristic ? "heuristic" : "remote_judge";
}

std::optional<ClassifierSource> classifier_source_from_name(std::string_view name) {
    if (name == "heuristic") return ClassifierSource::Heuristic;
    if (name == "remote_judge") return ClassifierSource::RemoteJudge;
    return std::nullopt;
}

bool LanguagePair::valid() const {
    return is_iso639_1(pivot) && is_iso639_1(partner) && pivot != partner;
}

std::string LanguagePair::to_string() const { return pivot + "-" + partner; }

std::optional<LanguagePair> LanguagePair::parse(std::string_view s) {
    auto dash = s.find('-');
    if (dash == std::string_view::npos) return std::nullopt;
    LanguagePair pair;
    pair.pivot = std::string(s.substr(0, dash));
    pair.partner = std::string(s.substr(dash + 1));
    if (!pair.valid()) return std::nullopt;
    return pair;
}

nlohmann::json document_to_json(const Document& doc, bool include_annotations) {
    nlohmann::json rec = doc.extra.is_object() ? doc.extra : nlohmann::json::object();
    rec["id"] = doc.doc_id;
    if (doc.url) rec["url"] = *doc.url;
    rec["text"] = doc.text;
    if (doc.lang_hint) rec["lang_hint"] = *doc.lang_hint;
    if (include_annotations && doc.annotations) {
        const AnnotationBlock& ann = *doc.annotations;
        nlohmann::json a;
        a["label"] = label_name(ann.label);
        a["classifier_source"] = classifier_source_name(ann.classifier_source);
        if (ann.category_confidence) a["category_confidence"] = *ann.category_confidence;
        if (!ann.reason.empty()) a["reason"] = ann.reason;
        if (ann.profile) {
            const DocLangProfile& p = *ann.profile;
            a["p_doc"] = {{p.pair.pivot, p.p_pivot}, {p.pair.partner, p.p_partner}};
            a["entropy"] = p.entropy;
            a["pair"] = p.pair.to_string();
            a["pair_mass"] = p.pair_mass;
            a["sentence_count"] = p.sentence_count;
        }
        rec["annotations"] = std::move(a);
    }
    return rec;
}

std::string document_to_line(const Document& doc, bool include_annotations) {
    return document_to_json(doc, include_annotations).dump();
}

std::optional<Document> document_from_line(std::string_view line, std::string* err) {
    nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object()) {
        if (err) *err = "not a valid JSON object";
        return std::nullopt;
    }
    if (!rec.contains("id") || !rec["id"].is_string() || rec["id"].get_ref<const std::string&>().empty()) {
        if (err) *err = "missing or empty \"id\"";
        return std::nullopt;
    }
    if (!rec.contains("text") || !rec["text"].is_string()) {
        if (err) *err = "missing \"text\"";
        return std::nullopt;
    }
    Document doc;
    doc.doc_id = rec["id"].get<std::string>();
    doc.text = rec["text"].get<std::string>();
    if (rec.contains("url") && rec["url"].is_string()) doc.url = rec["url"].get<std::string>();
    if (rec.contains("lang_hint") && rec["lang_hint"].is_string())
        doc.lang_hint = rec["lang_hint"].get<std::string>();

    if (rec.contains("annotations") && rec["annotations"].is_object()) {
        const nlohmann::json& a = rec["annotations"];
        AnnotationBlock ann;
        if (a.contains("label") && a["label"].is_string()) {
            auto label = label_from_name(a["label"].get_ref<const std::string&>());
            if (!label) {
                if (err) *err = "unknown annotation label";
                return std::nullopt;
            }
            ann.label = *label;
        }
        if (a.contains("classifier_source") && a["classifier_source"].is_string()) {
            if (auto src = classifier_source_from_name(a["classifier_source"].get_ref<const std::string&>()))
                ann.classifier_source = *src;
        }
        if (a.contains("category_confidence") && a["category_confidence"].is_number())
            ann.category_confidence = a["category_confidence"].get<double>();
        if (a.contains("reason") && a["reason"].is_string())
            ann.reason = a["reason"].get<std::string>();
        if (a.contains("pair") && a["pair"].is_string()) {
            auto pair = LanguagePair::parse(a["pair"].get_ref<const std::string&>());
            if (pair) {
                DocLangProfile prof;
                prof.pair = *pair;
                if (a.contains("p_doc") && a["p_doc"].is_object()) {
                    const nlohmann::json& pd = a["p_doc"];
                    if (pd.contains(prof.pair.pivot)) prof.p_pivot = pd[prof.pair.pivot].get<double>();
                    if (pd.contains(prof.pair.partner)) prof.p_partner = pd[prof.pair.partner].get<double>();
                }
                if (a.contains("entropy")) prof.entropy = a["entropy"].get<double>();
                if (a.contains("pair_mass")) prof.pair_mass = a["pair_mass"].get<double>();
                if (a.contains("sentence_count")) prof.sentence_count = a["sentence_count"].get<std::int64_t>();
                ann.profile = prof;
            }
        }
        doc.annotations = ann;
    }

    for (auto it = rec.begin(); it != rec.end(); ++it) {
        if (it.key() == "id" || it.key() == "url" || it.key() == "text" ||
            it.key() == "lang_hint" || it.key() == "annotations")
            continue;
        doc.extra[it.key()] = it.value();
    }
    return doc;
}

}  // namespace lingmix
