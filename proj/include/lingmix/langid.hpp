#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace lingmix {

// Character n-gram language identifier. Scores are a softmax over the
// per-language mean n-gram log-probability of the lowercased sentence,
// so scores stay comparable across sentence lengths (repetition shifts
// them only through the n-grams spanning the joins).
//
// The model is immutable after load/train; scoring is pure and safe for
// concurrent use.
class LangIdModel {
public:
    struct ScoreResult {
        std::vector<float> probs;  // aligned with languages(), sums to 1
        bool no_signal = false;    // zero extractable n-grams: uniform fallback
    };

    const std::vector<std::string>& languages() const { return languages_; }
    int min_n() const { return min_n_; }
    int max_n() const { return max_n_; }
    float temperature() const { return temperature_; }
    float smoothing_logprob() const { return smoothing_logprob_; }
    std::size_t table_size() const { return row_count_; }

    int language_index(std::string_view code) const;

    ScoreResult score_sentence(std::string_view sentence) const;

    // Deterministic training on per-language corpora (training text order
    // matters only through n-gram counts, so it does not). Each language
    // must supply at least min_tokens word tokens. Per language, only the
    // vocab_cap most frequent n-grams are kept.
    static LangIdModel train(const std::vector<std::pair<std::string, std::string>>& corpora,
                             int min_n = 1, int max_n = 3, std::size_t vocab_cap = 20000,
                             std::int64_t min_tokens = 10000);

    // Versioned text container; save(load(f)) is byte-identical.
    void save(const std::string& path) const;
    static LangIdModel load(const std::string& path);
    void save(std::ostream& out) const;
    static LangIdModel load(std::istream& in, const std::string& name);

private:
    // n-grams are byte sequences of length 1..3 packed into a u32 key
    // (length tag in the top byte). The open-addressing table maps key ->
    // row in logprobs_ (stride = languages count).
    std::uint32_t find_row(std::uint32_t key) const;
    void build_table(const std::vector<std::pair<std::uint32_t, std::vector<float>>>& entries);

    // Direct-index fast paths for 1- and 2-grams (scoring hot loop).
    std::vector<std::uint32_t> uni_rows_;  // 256
    std::vector<std::uint32_t> bi_rows_;   // 65536

    std::vector<std::string> languages_;
    int min_n_ = 1;
    int max_n_ = 3;
    float temperature_ = 1.0f;
    float smoothing_logprob_ = -16.0f;
    std::vector<std::uint32_t> slot_keys_;   // key+1; 0 = empty
    std::vector<std::uint32_t> slot_rows_;
    std::vector<float> logprobs_;            // row-major, stride languages_.size()
    std::size_t row_count_ = 0;
    std::uint32_t mask_ = 0;

    friend struct LangIdModelTestAccess;
};

}  // namespace lingmix
