#pragma once

#include <cstdint>
#include <vector>

#include "lingmix/document.hpp"
#include "lingmix/langid.hpp"
#include "lingmix/segmenter.hpp"

namespace lingmix {

struct FilterConfig {
    double tau = 0.1;            // candidacy threshold on H, nats, strict
    double min_pair_mass = 0.5;  // below this the document is OutOfPair
    std::int64_t max_doc_bytes = 2 * 1024 * 1024;
    // When true, sentence scores are renormalized over the pair before
    // length-weighted aggregation (sensitivity analysis; default keeps
    // the single post-aggregation normalization).
    bool normalize_before_aggregation = false;
};

// Scored sentence view used by profiling: length weight plus the raw
// scorer masses for pivot / partner / everything else.
struct ScoredSpan {
    std::int64_t length_weight = 0;
    double p_pivot = 0.0;
    double p_partner = 0.0;
    double p_other = 0.0;
};

// Length-weighted pair distribution and entropy from already-scored spans.
DocLangProfile profile_from_spans(const std::vector<ScoredSpan>& spans, const LanguagePair& pair,
                                  const FilterConfig& config);

// Segments, scores, and aggregates a document. Empty / zero-span
// documents come back as p=(1,0), H=0, pair_mass=0.
DocLangProfile profile_document(const Document& doc, const LanguagePair& pair,
                                const LangIdModel& model, const FilterConfig& config,
                                const SegmenterConfig& seg_config = default_segmenter_config());

// Candidate iff H > tau (strict); OutOfPair when the pair holds less
// than min_pair_mass of the raw score mass.
BilingualLabel label_candidate(const DocLangProfile& profile, const FilterConfig& config);

struct Stage1Summary {
    std::int64_t doc_count = 0;
    std::int64_t candidate_count = 0;
    std::int64_t monolingual_count = 0;
    std::int64_t out_of_pair_count = 0;
    std::int64_t error_count = 0;
    std::int64_t text_bytes = 0;

    double candidate_rate() const;
    double monolingual_rate() const;
    double out_of_pair_rate() const;
    void merge(const Stage1Summary& other);
};

// Annotates documents in place; order preserved regardless of workers.
// Oversize documents are passed through as OutOfPair/"oversize".
Stage1Summary run_stage1(std::vector<Document>& docs, const LanguagePair& pair,
                         const LangIdModel& model, const FilterConfig& config,
                         int workers = 1);

// Single-document version of the Stage-1 annotation step.
void annotate_stage1(Document& doc, const LanguagePair& pair, const LangIdModel& model,
                     const FilterConfig& config, const SegmenterConfig& seg_config);

}  // namespace lingmix
