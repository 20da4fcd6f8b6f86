#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace lingmix {

// Pipeline verdict for a document. Candidate is the Stage-1 intermediate
// state; CandidateUnresolved marks candidates the remote judge could not
// settle.
enum class BilingualLabel {
    Monolingual,
    Candidate,
    Parallel,
    CodeSwitching,
    Miscellaneous,
    OutOfPair,
    CandidateUnresolved,
};

std::string_view label_name(BilingualLabel label);
std::optional<BilingualLabel> label_from_name(std::string_view name);

enum class ClassifierSource { Heuristic, RemoteJudge };

std::string_view classifier_source_name(ClassifierSource src);
std::optional<ClassifierSource> classifier_source_from_name(std::string_view name);

// pivot is "en" for all of the shipped configs; partner is open-set.
struct LanguagePair {
    std::string pivot = "en";
    std::string partner;

    bool valid() const;
    std::string to_string() const;                       // "en-fr"
    static std::optional<LanguagePair> parse(std::string_view s);
};

// Length-weighted document language distribution restricted to the pair,
// plus its entropy in nats.
struct DocLangProfile {
    LanguagePair pair;
    double p_pivot = 1.0;
    double p_partner = 0.0;
    double entropy = 0.0;       // nats, in [0, ln 2]
    double pair_mass = 0.0;     // fraction of raw score mass on the pair
    std::int64_t sentence_count = 0;
};

struct AnnotationBlock {
    std::optional<DocLangProfile> profile;
    BilingualLabel label = BilingualLabel::Monolingual;
    ClassifierSource classifier_source = ClassifierSource::Heuristic;
    std::optional<double> category_confidence;
    std::string reason;   // e.g. "oversize" for OutOfPair passthroughs
};

struct Document {
    std::string doc_id;
    std::optional<std::string> url;
    std::string text;
    std::optional<std::string> lang_hint;
    std::optional<AnnotationBlock> annotations;
    // Unknown top-level record keys, preserved verbatim on passthrough.
    nlohmann::json extra = nlohmann::json::object();
};

// Record (de)serialization for the line-delimited corpus format.
// Keys: "id", "url", "text", "lang_hint", "annotations".
nlohmann::json document_to_json(const Document& doc, bool include_annotations = true);
std::string document_to_line(const Document& doc, bool include_annotations = true);

struct RecordError {
    std::string shard;
    std::int64_t line_number = 0;
    std::string message;
};

// Returns the parsed document or sets `err` and returns nullopt.
std::optional<Document> document_from_line(std::string_view line, std::string* err);

}  // namespace lingmix
