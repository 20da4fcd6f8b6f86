#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lingmix/document.hpp"
#include "lingmix/langid.hpp"

namespace lingmix {

// Deterministic text corpus for the built-in language inventory
// (en, de, es, fr). Used both to train the bundled langid model and as
// the vocabulary pool for synthetic corpora.
std::string builtin_training_corpus(const std::string& lang);

const std::vector<std::string>& builtin_languages();

// Trains the bundled 4-language model (deterministic; cached).
const LangIdModel& bundled_model();

struct SynthConfig {
    std::uint64_t seed = 1;
    std::int64_t doc_count = 1000;
    LanguagePair pair{"en", "fr"};
    double bilingual_rate = 0.02;
    // Category mix over the bilingual portion; renormalized internally.
    double parallel_share = 0.14;
    double code_switching_share = 0.72;
    double miscellaneous_share = 0.14;
};

// Synthetic corpus with exact planted counts (rates rounded to whole
// documents) in a seeded deterministic shuffle. Every document records
// its ground truth in the passthrough key "planted"
// (monolingual | parallel | code_switching | miscellaneous).
std::vector<Document> synth_corpus(const SynthConfig& config);

// Synthetic translation outputs for the generation-language-rate
// instrument: target_rate fraction in pair.partner, mixed_rate as
// half-and-half concatenations, remainder as pivot passthroughs.
std::vector<std::pair<std::string, std::string>> synth_outputs(std::uint64_t seed,
                                                               std::int64_t count,
                                                               const LanguagePair& pair,
                                                               double target_rate,
                                                               double mixed_rate);

}  // namespace lingmix
