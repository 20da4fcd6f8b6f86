#include "lingmix/langid.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "lingmix/segmenter.hpp"

namespace lingmix {

namespace {

constexpr std::uint32_t kHashMul = 0x9E3779B1u;
constexpr const char* kMagic = "LINGMIX-LANGID v1";

std::string lower_bytes(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c += 32;
    return out;
}

inline std::uint32_t pack_key(const unsigned char* p, int n) {
    std::uint32_t key = static_cast<std::uint32_t>(n) << 24;
    key |= static_cast<std::uint32_t>(p[0]) << 16;
    if (n > 1) key |= static_cast<std::uint32_t>(p[1]) << 8;
    if (n > 2) key |= static_cast<std::uint32_t>(p[2]);
    return key;
}

std::string format_float(float v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(v));
    return buf;
}

}  // namespace

int LangIdModel::language_index(std::string_view code) const {
    for (std::size_t i = 0; i < languages_.size(); ++i)
        if (languages_[i] == code) return static_cast<int>(i);
    return -1;
}

std::uint32_t LangIdModel::find_row(std::uint32_t key) const {
    std::uint32_t idx = (key * kHashMul) & mask_;
    const std::uint32_t probe = key + 1;
    while (true) {
        std::uint32_t slot = slot_keys_[idx];
        if (slot == probe) return slot_rows_[idx];
        if (slot == 0) return UINT32_MAX;
        idx = (idx + 1) & mask_;
    }
}

void LangIdModel::build_table(
    const std::vector<std::pair<std::uint32_t, std::vector<float>>>& entries) {
    row_count_ = entries.size();
    std::size_t cap = 16;
    while (cap < entries.size() * 2) cap <<= 1;
    mask_ = static_cast<std::uint32_t>(cap - 1);
    slot_keys_.assign(cap, 0);
    slot_rows_.assign(cap, 0);
    logprobs_.clear();
    logprobs_.reserve(entries.size() * languages_.size());
    for (std::size_t row = 0; row < entries.size(); ++row) {
        const auto& [key, lps] = entries[row];
        std::uint32_t idx = (key * kHashMul) & mask_;
        while (slot_keys_[idx] != 0) idx = (idx + 1) & mask_;
        slot_keys_[idx] = key + 1;
        slot_rows_[idx] = static_cast<std::uint32_t>(row);
        logprobs_.insert(logprobs_.end(), lps.begin(), lps.end());
    }

    uni_rows_.assign(256, UINT32_MAX);
    bi_rows_.assign(65536, UINT32_MAX);
    for (std::size_t row = 0; row < entries.size(); ++row) {
        const std::uint32_t key = entries[row].first;
        const std::uint32_t n = key >> 24;
        if (n == 1) uni_rows_[(key >> 16) & 0xFFu] = static_cast<std::uint32_t>(row);
        else if (n == 2) bi_rows_[(key >> 8) & 0xFFFFu] = static_cast<std::uint32_t>(row);
    }
}

LangIdModel::ScoreResult LangIdModel::score_sentence(std::string_view sentence) const {
    const std::size_t langs = languages_.size();
    ScoreResult result;
    result.probs.assign(langs, 0.0f);

    std::string lowered = lower_bytes(sentence);
    // Whitespace carries no language signal; an all-whitespace input must
    // not score the table's space n-grams.
    if (lowered.find_first_not_of(" \t\r\n\f\v") == std::string::npos) lowered.clear();
    const unsigned char* data = reinterpret_cast<const unsigned char*>(lowered.data());
    const std::size_t len = lowered.size();

    double sums[16] = {0};
    std::int64_t count = 0;
    std::int64_t misses = 0;  // unseen n-grams penalize every language equally
    auto add_row = [&](std::uint32_t row) {
        ++count;
        if (row == UINT32_MAX) {
            ++misses;
            return;
        }
        const float* lp = logprobs_.data() + static_cast<std::size_t>(row) * langs;
        for (std::size_t l = 0; l < langs; ++l) sums[l] += lp[l];
    };
    if (min_n_ <= 1 && max_n_ >= 1)
        for (std::size_t i = 0; i < len; ++i) add_row(uni_rows_[data[i]]);
    if (min_n_ <= 2 && max_n_ >= 2 && len >= 2)
        for (std::size_t i = 0; i + 2 <= len; ++i)
            add_row(bi_rows_[(static_cast<std::uint32_t>(data[i]) << 8) | data[i + 1]]);
    if (max_n_ >= 3 && len >= 3)
        for (std::size_t i = 0; i + 3 <= len; ++i) add_row(find_row(pack_key(data + i, 3)));
    for (std::size_t l = 0; l < langs; ++l) sums[l] += smoothing_logprob_ * misses;

    if (count == 0) {
        result.no_signal = true;
        for (std::size_t l = 0; l < langs; ++l)
            result.probs[l] = 1.0f / static_cast<float>(langs);
        return result;
    }

    double best = -1e300;
    for (std::size_t l = 0; l < langs; ++l) {
        sums[l] = sums[l] / static_cast<double>(count) / temperature_;
        best = std::max(best, sums[l]);
    }
    double total = 0;
    for (std::size_t l = 0; l < langs; ++l) {
        sums[l] = std::exp(sums[l] - best);
        total += sums[l];
    }
    for (std::size_t l = 0; l < langs; ++l)
        result.probs[l] = static_cast<float>(sums[l] / total);
    return result;
}

LangIdModel LangIdModel::train(const std::vector<std::pair<std::string, std::string>>& corpora,
                               int min_n, int max_n, std::size_t vocab_cap,
                               std::int64_t min_tokens) {
    if (corpora.empty()) throw std::runtime_error("langid training requires at least one language");
    if (corpora.size() > 16) throw std::runtime_error("langid supports at most 16 languages");
    LangIdModel model;
    model.min_n_ = min_n;
    model.max_n_ = max_n;

    const std::size_t langs = corpora.size();
    std::vector<std::unordered_map<std::uint32_t, std::int64_t>> counts(langs);
    std::vector<std::int64_t> totals(langs, 0);

    for (std::size_t l = 0; l < langs; ++l) {
        const auto& [lang, text] = corpora[l];
        model.languages_.push_back(lang);
        if (count_word_tokens(text) < min_tokens)
            throw std::runtime_error("insufficient training data for language \"" + lang +
                                     "\": need at least " + std::to_string(min_tokens) +
                                     " word tokens");
        std::string lowered = lower_bytes(text);
        const unsigned char* data = reinterpret_cast<const unsigned char*>(lowered.data());
        for (int n = min_n; n <= max_n; ++n) {
            if (lowered.size() < static_cast<std::size_t>(n)) continue;
            for (std::size_t i = 0; i + n <= lowered.size(); ++i) {
                std::uint32_t key = pack_key(data + i, n);
                ++counts[l][key];
                ++totals[l];
            }
        }
    }

    // Per language, keep the vocab_cap most frequent n-grams (ties by key).
    std::vector<std::unordered_map<std::uint32_t, std::int64_t>> kept(langs);
    std::vector<std::uint32_t> union_keys;
    for (std::size_t l = 0; l < langs; ++l) {
        std::vector<std::pair<std::uint32_t, std::int64_t>> sorted(counts[l].begin(),
                                                                   counts[l].end());
        std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        if (sorted.size() > vocab_cap) sorted.resize(vocab_cap);
        for (const auto& [key, cnt] : sorted) {
            kept[l].emplace(key, cnt);
            union_keys.push_back(key);
        }
    }
    std::sort(union_keys.begin(), union_keys.end());
    union_keys.erase(std::unique(union_keys.begin(), union_keys.end()), union_keys.end());

    // Small additive smoothing keeps unseen-n-gram penalties strong, which
    // is what makes per-sentence confidences sharp enough for the entropy
    // threshold downstream.
    const double alpha = 1e-9;
    const double vocab = static_cast<double>(union_keys.size()) + 1.0;
    std::vector<std::pair<std::uint32_t, std::vector<float>>> entries;
    entries.reserve(union_keys.size());
    float min_lp = 0.0f;
    for (std::uint32_t key : union_keys) {
        std::vector<float> lps(langs);
        for (std::size_t l = 0; l < langs; ++l) {
            auto it = kept[l].find(key);
            double c = it == kept[l].end() ? 0.0 : static_cast<double>(it->second);
            double lp = std::log((c + alpha) / (static_cast<double>(totals[l]) + alpha * vocab));
            lps[l] = static_cast<float>(lp);
            min_lp = std::min(min_lp, lps[l]);
        }
        entries.emplace_back(key, std::move(lps));
    }
    model.smoothing_logprob_ = min_lp - 1.0f;
    model.build_table(entries);
    return model;
}

void LangIdModel::save(std::ostream& out) const {
    out << kMagic << "\n";
    out << "languages";
    for (const auto& lang : languages_) out << ' ' << lang;
    out << "\n";
    out << "n_range " << min_n_ << ' ' << max_n_ << "\n";
    out << "temperature " << format_float(temperature_) << "\n";
    out << "smoothing " << format_float(smoothing_logprob_) << "\n";
    out << "rows " << row_count_ << "\n";

    // Rows sorted by key for a canonical byte stream.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> rows;  // key -> row
    rows.reserve(row_count_);
    for (std::size_t i = 0; i < slot_keys_.size(); ++i)
        if (slot_keys_[i] != 0) rows.emplace_back(slot_keys_[i] - 1, slot_rows_[i]);
    std::sort(rows.begin(), rows.end());
    char keybuf[16];
    for (const auto& [key, row] : rows) {
        std::snprintf(keybuf, sizeof(keybuf), "%08x", key);
        out << keybuf;
        const float* lp = logprobs_.data() + static_cast<std::size_t>(row) * languages_.size();
        for (std::size_t l = 0; l < languages_.size(); ++l) out << ' ' << format_float(lp[l]);
        out << "\n";
    }
    out << "end\n";
}

void LangIdModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open model file for writing: " + path);
    save(out);
    out.close();
    if (out.fail()) throw std::runtime_error("write failure on model file: " + path);
}

LangIdModel LangIdModel::load(std::istream& in, const std::string& name) {
    auto fail = [&](const std::string& what) -> std::runtime_error {
        return std::runtime_error("invalid langid model \"" + name + "\": " + what);
    };
    std::string line;
    if (!std::getline(in, line) || line != kMagic) throw fail("bad or missing header");

    LangIdModel model;
    if (!std::getline(in, line)) throw fail("truncated (languages)");
    {
        std::istringstream ls(line);
        std::string word;
        ls >> word;
        if (word != "languages") throw fail("expected languages line");
        while (ls >> word) model.languages_.push_back(word);
        if (model.languages_.empty() || model.languages_.size() > 16)
            throw fail("bad language inventory");
    }
    if (!std::getline(in, line)) throw fail("truncated (n_range)");
    if (std::sscanf(line.c_str(), "n_range %d %d", &model.min_n_, &model.max_n_) != 2 ||
        model.min_n_ < 1 || model.max_n_ > 3 || model.min_n_ > model.max_n_)
        throw fail("bad n_range");
    if (!std::getline(in, line)) throw fail("truncated (temperature)");
    if (std::sscanf(line.c_str(), "temperature %f", &model.temperature_) != 1 ||
        model.temperature_ <= 0)
        throw fail("bad temperature");
    if (!std::getline(in, line)) throw fail("truncated (smoothing)");
    if (std::sscanf(line.c_str(), "smoothing %f", &model.smoothing_logprob_) != 1 ||
        !(model.smoothing_logprob_ <= 0) || !std::isfinite(model.smoothing_logprob_))
        throw fail("bad smoothing logprob");
    std::size_t rows = 0;
    if (!std::getline(in, line) || std::sscanf(line.c_str(), "rows %zu", &rows) != 1)
        throw fail("bad row count");

    std::vector<std::pair<std::uint32_t, std::vector<float>>> entries;
    entries.reserve(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!std::getline(in, line)) throw fail("truncated row table");
        std::istringstream ls(line);
        std::string keyhex;
        ls >> keyhex;
        std::uint32_t key = 0;
        if (std::sscanf(keyhex.c_str(), "%x", &key) != 1) throw fail("bad row key");
        std::vector<float> lps(model.languages_.size());
        for (float& lp : lps) {
            if (!(ls >> lp)) throw fail("short row");
            if (!std::isfinite(lp) || lp > 0) throw fail("log-probability out of range");
        }
        entries.emplace_back(key, std::move(lps));
    }
    if (!std::getline(in, line) || line != "end") throw fail("missing end marker (truncated?)");
    model.build_table(entries);
    return model;
}

LangIdModel LangIdModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    return load(in, path);
}

}  // namespace lingmix
