#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace lingmix {

// A segmented sentence. byte_begin/byte_end index into the parent text;
// spans are non-overlapping and in document order. lang_scores, when
// filled by the language scorer, is aligned with the model's language
// inventory.
struct SentenceSpan {
    std::string text;
    std::size_t byte_begin = 0;
    std::size_t byte_end = 0;
    std::int64_t length_weight = 0;  // word-like token count, >= 1
    std::vector<float> lang_scores;
};

struct SegmenterConfig {
    // Lowercased abbreviation tokens without the trailing dot ("dr", "z", "sr").
    std::unordered_set<std::string> abbreviations;
    std::int64_t max_span_tokens = 2000;
};

// Bundled en/de/es/fr abbreviation lists.
const SegmenterConfig& default_segmenter_config();

// One abbreviation per line, UTF-8, '#' comments. Entries may carry the
// trailing dot; it is stripped.
std::unordered_set<std::string> load_abbreviations(const std::string& path);

// Count of maximal runs of word-like characters (letters/digits).
std::int64_t count_word_tokens(std::string_view text);

// Rule-based sentence segmentation: splits at [. ! ? ...] followed by
// whitespace and an uppercase letter, digit, or opening quote, and at
// newline runs. Spans with no word-like token are dropped.
std::vector<SentenceSpan> segment(std::string_view text,
                                  const SegmenterConfig& config = default_segmenter_config());

}  // namespace lingmix
