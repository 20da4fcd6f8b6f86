#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "lingmix/document.hpp"
#include "lingmix/langid.hpp"
#include "lingmix/segmenter.hpp"

namespace lingmix {

// Contiguous run of same-language sentences, with surface anchors used
// for parallel detection (numbers, capitalized tokens, URLs, long tokens
// with diacritics stripped).
struct LangBlock {
    std::string language;
    std::size_t first_span = 0;
    std::size_t last_span = 0;  // inclusive
    std::int64_t token_count = 0;
    std::unordered_set<std::string> anchors;
};

struct ClassifierConfig {
    int min_minority_sentences = 2;
    double min_minority_token_share = 0.05;
    double parallel_block_pair_score_min = 0.5;
    double parallel_paired_fraction_min = 0.6;
    std::int64_t misc_max_minority_block_tokens = 30;
    double anchor_jaccard_floor = 0.15;
    double length_ratio_band_low = 0.5;
    double length_ratio_band_high = 2.0;
};

// Per-document sentence evidence shared by verify and classify.
struct SpanEvidence {
    std::vector<SentenceSpan> spans;
    // Per span: 0 = pivot, 1 = partner (whichever of the two scores higher).
    std::vector<int> pair_side;
    std::int64_t pivot_tokens = 0;
    std::int64_t partner_tokens = 0;
};

SpanEvidence collect_span_evidence(const Document& doc, const LanguagePair& pair,
                                   const LangIdModel& model,
                                   const SegmenterConfig& seg_config = default_segmenter_config());

std::vector<LangBlock> build_lang_blocks(const SpanEvidence& evidence, const LanguagePair& pair);

double anchor_jaccard(const LangBlock& a, const LangBlock& b);

// Step 1: is the candidate genuinely bilingual? Inclusive bounds.
bool verify_bilingual(const SpanEvidence& evidence, const ClassifierConfig& config);

enum class BilingualCategory { Parallel, CodeSwitching, Miscellaneous };

BilingualLabel category_to_label(BilingualCategory cat);

struct Classification {
    BilingualCategory category = BilingualCategory::Miscellaneous;
    double confidence = 0.0;
};

// Step 2: deterministic rule-based category assignment over LangBlocks.
Classification classify_heuristic(const SpanEvidence& evidence, const LanguagePair& pair,
                                  const ClassifierConfig& config);

// ---- Remote judge (chat-completion style JSON over HTTP) ----

struct JudgeConfig {
    std::string endpoint_url;  // e.g. "http://host:port/v1/chat/completions"
    std::string model_name = "judge";
    // Templates must contain "{document}" exactly once.
    std::string verify_prompt_template;
    std::string classify_prompt_template;
    int max_retries = 3;
    int timeout_seconds = 30;
    int backoff_initial_ms = 250;
    bool delegate_verify = true;  // let the judge run step 1 too

    bool templates_valid() const;
    static JudgeConfig with_default_prompts();
};

struct JudgeOutcome {
    bool resolved = false;  // false -> CandidateUnresolved
    bool verified = false;
    Classification classification;
    std::string failure;  // diagnostic when unresolved
};

JudgeOutcome classify_remote(const Document& doc, const JudgeConfig& judge);

enum class Stage2Mode { Heuristic, Remote, RemoteWithHeuristicFallback };

struct Stage2Summary {
    std::int64_t candidates = 0;
    std::int64_t reverted_monolingual = 0;
    std::int64_t parallel = 0;
    std::int64_t code_switching = 0;
    std::int64_t miscellaneous = 0;
    std::int64_t unresolved = 0;
};

// Resolves every Stage-1 Candidate into exactly one final label.
// Non-candidate documents pass through untouched.
Stage2Summary run_stage2(std::vector<Document>& docs, const LanguagePair& pair,
                         const LangIdModel& model, Stage2Mode mode,
                         const ClassifierConfig& config,
                         const std::optional<JudgeConfig>& judge = std::nullopt,
                         int workers = 1);

}  // namespace lingmix
