#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lingmix/document.hpp"
#include "lingmix/entropy_filter.hpp"
#include "lingmix/langid.hpp"

namespace lingmix {

struct CompositionReport {
    LanguagePair pair;
    std::int64_t total_docs = 0;
    std::int64_t bilingual_docs = 0;  // Parallel + CodeSwitching + Miscellaneous
    double total_bilingual_share = 0.0;
    std::map<BilingualLabel, std::int64_t> category_counts;
    std::map<BilingualLabel, double> category_shares;  // over bilingual docs

    void merge(const CompositionReport& other);
};

CompositionReport composition_report(const std::vector<Document>& corpus,
                                     const LanguagePair& pair);

struct DomainEntry {
    std::string domain;
    std::int64_t doc_count = 0;
    double share = 0.0;  // of the category's documents
};

struct DomainReport {
    int top_k = 50;
    // Per category, ranked by count descending, ties lexicographic.
    std::map<BilingualLabel, std::vector<DomainEntry>> per_category;
};

// Registrable domain per a bundled public-suffix-style list. Absent URLs
// count under "(no-url)", unparseable ones under "(invalid-url)".
std::string registrable_domain(std::string_view url);

DomainReport domain_report(const std::vector<Document>& corpus, int top_k = 50);

// ---- Generation-language-rate classification ----

enum class GenLangClass { Target, Source, Mixed };

struct GenLangThresholds {
    double theta_target = 0.9;  // partner mass at/above this -> target
    double tau_mixed = 0.1;     // entropy above this (and below target bar) -> mixed
};

struct GenLangReport {
    std::int64_t sample_count = 0;
    std::map<GenLangClass, std::int64_t> counts;
    std::map<GenLangClass, double> rates;
};

GenLangClass classify_generation(std::string_view generated_text, const LanguagePair& pair,
                                 const LangIdModel& model, const GenLangThresholds& thresholds);

GenLangReport gen_lang_rate(const std::vector<std::pair<std::string, std::string>>& outputs,
                            const LanguagePair& pair, const LangIdModel& model,
                            const GenLangThresholds& thresholds = {});

// ---- Rendering ----

std::string render_composition(const CompositionReport& report, bool machine);
std::string render_domains(const DomainReport& report, bool machine);
std::string render_gen_lang(const GenLangReport& report, bool machine);

}  // namespace lingmix
