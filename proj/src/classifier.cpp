#include "lingmix/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace lingmix {

namespace {

bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }

// First byte of a UTF-8 Latin uppercase letter (ASCII or Latin-1 range).
bool starts_uppercase(std::string_view token) {
    if (token.empty()) return false;
    unsigned char b = static_cast<unsigned char>(token[0]);
    if (b < 0x80) return is_ascii_upper(static_cast<char>(b));
    if (b == 0xC3 && token.size() >= 2) {
        unsigned char b2 = static_cast<unsigned char>(token[1]);
        // U+00C0..U+00DE minus the multiplication sign
        return b2 >= 0x80 && b2 <= 0x9E && b2 != 0x97;
    }
    return false;
}

// Lowercase + strip common Latin diacritics; non-Latin bytes pass through.
std::string normalize_anchor(std::string_view token) {
    std::string out;
    out.reserve(token.size());
    for (std::size_t i = 0; i < token.size(); ++i) {
        unsigned char b = static_cast<unsigned char>(token[i]);
        if (b < 0x80) {
            char c = static_cast<char>(b);
            if (c >= 'A' && c <= 'Z') c += 32;
            out.push_back(c);
            continue;
        }
        if (b == 0xC3 && i + 1 < token.size()) {
            unsigned char b2 = static_cast<unsigned char>(token[++i]);
            char32_t cp = 0xC0 + (b2 - 0x80);
            if (cp >= 0xC0 && cp <= 0xDE) cp += 0x20;  // uppercase -> lowercase
            if (cp >= 0xE0 && cp <= 0xE5) { out.push_back('a'); continue; }
            if (cp == 0xE6) { out += "ae"; continue; }
            if (cp == 0xE7) { out.push_back('c'); continue; }
            if (cp >= 0xE8 && cp <= 0xEB) { out.push_back('e'); continue; }
            if (cp >= 0xEC && cp <= 0xEF) { out.push_back('i'); continue; }
            if (cp == 0xF1) { out.push_back('n'); continue; }
            if (cp >= 0xF2 && cp <= 0xF6) { out.push_back('o'); continue; }
            if (cp == 0xF8) { out.push_back('o'); continue; }
            if (cp >= 0xF9 && cp <= 0xFC) { out.push_back('u'); continue; }
            if (cp == 0xFD || cp == 0xFF) { out.push_back('y'); continue; }
            if (cp == 0xDF) { out += "ss"; continue; }
            out.push_back('?');
            continue;
        }
        if (b == 0xC5 && i + 1 < token.size()) {
            unsigned char b2 = static_cast<unsigned char>(token[i + 1]);
            if (b2 == 0x92 || b2 == 0x93) {  // OE ligature
                out += "oe";
                ++i;
                continue;
            }
        }
        out.push_back(static_cast<char>(b));
    }
    return out;
}

void add_anchors(std::string_view text, std::unordered_set<std::string>& anchors) {
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t begin = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == begin) continue;
        std::string_view chunk = text.substr(begin, i - begin);

        if (chunk.find("://") != std::string_view::npos ||
            chunk.substr(0, 4) == "www.") {
            anchors.insert("url:" + normalize_anchor(chunk));
            continue;
        }
        // Trim surrounding punctuation.
        std::size_t s = 0, e = chunk.size();
        auto is_punct = [](char c) {
            return std::ispunct(static_cast<unsigned char>(c)) != 0;
        };
        while (s < e && is_punct(chunk[s])) ++s;
        while (e > s && is_punct(chunk[e - 1])) --e;
        if (s >= e) continue;
        std::string_view word = chunk.substr(s, e - s);

        bool has_digit = std::any_of(word.begin(), word.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c));
        });
        if (has_digit) {
            anchors.insert("num:" + normalize_anchor(word));
            continue;
        }
        std::string norm = normalize_anchor(word);
        if (starts_uppercase(word) && norm.size() >= 2) {
            anchors.insert("cap:" + norm);
            continue;
        }
        if (norm.size() >= 6) anchors.insert("tok:" + norm);
    }
}

}  // namespace

SpanEvidence collect_span_evidence(const Document& doc, const LanguagePair& pair,
                                   const LangIdModel& model, const SegmenterConfig& seg_config) {
    const int pivot_idx = model.language_index(pair.pivot);
    const int partner_idx = model.language_index(pair.partner);
    if (pivot_idx < 0 || partner_idx < 0)
        throw std::runtime_error("language pair " + pair.to_string() +
                                 " is not covered by the langid model");
    SpanEvidence ev;
    ev.spans = segment(doc.text, seg_config);
    ev.pair_side.reserve(ev.spans.size());
    for (SentenceSpan& span : ev.spans) {
        auto result = model.score_sentence(span.text);
        span.lang_scores = result.probs;
        const float p_pivot = result.probs[static_cast<std::size_t>(pivot_idx)];
        const float p_partner = result.probs[static_cast<std::size_t>(partner_idx)];
        int side = p_partner > p_pivot ? 1 : 0;
        ev.pair_side.push_back(side);
        (side == 0 ? ev.pivot_tokens : ev.partner_tokens) += span.length_weight;
    }
    return ev;
}

std::vector<LangBlock> build_lang_blocks(const SpanEvidence& evidence, const LanguagePair& pair) {
    std::vector<LangBlock> blocks;
    for (std::size_t i = 0; i < evidence.spans.size(); ++i) {
        const int side = evidence.pair_side[i];
        const std::string& lang = side == 0 ? pair.pivot : pair.partner;
        if (blocks.empty() || blocks.back().language != lang) {
            LangBlock block;
            block.language = lang;
            block.first_span = i;
            blocks.push_back(std::move(block));
        }
        LangBlock& block = blocks.back();
        block.last_span = i;
        block.token_count += evidence.spans[i].length_weight;
        add_anchors(evidence.spans[i].text, block.anchors);
    }
    return blocks;
}

double anchor_jaccard(const LangBlock& a, const LangBlock& b) {
    if (a.anchors.empty() && b.anchors.empty()) return 0.0;
    const auto& small = a.anchors.size() <= b.anchors.size() ? a.anchors : b.anchors;
    const auto& large = a.anchors.size() <= b.anchors.size() ? b.anchors : a.anchors;
    std::size_t inter = 0;
    for (const std::string& anchor : small)
        if (large.count(anchor)) ++inter;
    const std::size_t uni = a.anchors.size() + b.anchors.size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

bool verify_bilingual(const SpanEvidence& evidence, const ClassifierConfig& config) {
    const bool minority_is_partner = evidence.partner_tokens <= evidence.pivot_tokens;
    const std::int64_t minority_tokens =
        minority_is_partner ? evidence.partner_tokens : evidence.pivot_tokens;
    const std::int64_t total = evidence.pivot_tokens + evidence.partner_tokens;
    if (total == 0) return false;

    int minority_sentences = 0;
    const int minority_side = minority_is_partner ? 1 : 0;
    for (int side : evidence.pair_side)
        if (side == minority_side) ++minority_sentences;

    const double share = static_cast<double>(minority_tokens) / static_cast<double>(total);
    return minority_sentences >= config.min_minority_sentences &&
           share >= config.min_minority_token_share;
}

BilingualLabel category_to_label(BilingualCategory cat) {
    switch (cat) {
        case BilingualCategory::Parallel: return BilingualLabel::Parallel;
        case BilingualCategory::CodeSwitching: return BilingualLabel::CodeSwitching;
        case BilingualCategory::Miscellaneous: return BilingualLabel::Miscellaneous;
    }
    return BilingualLabel::Miscellaneous;
}

Classification classify_heuristic(const SpanEvidence& evidence, const LanguagePair& pair,
                                  const ClassifierConfig& config) {
    std::vector<LangBlock> blocks = build_lang_blocks(evidence, pair);
    Classification result;

    // Score each adjacent opposite-language block pair: length-ratio fit
    // within the band plus anchor-set overlap.
    const double band_span = std::log(config.length_ratio_band_high / config.length_ratio_band_low);
    auto pair_score = [&](const LangBlock& a, const LangBlock& b) {
        double ratio = static_cast<double>(a.token_count) / static_cast<double>(b.token_count);
        double log_r = std::abs(std::log(ratio));
        double half_band = band_span / 2.0;  // symmetric band around ratio 1
        double ratio_fit = 0.0;
        if (ratio > config.length_ratio_band_low && ratio < config.length_ratio_band_high)
            ratio_fit = 1.0 - log_r / (2.0 * half_band);
        double jac = anchor_jaccard(a, b);
        double jac_fit = std::min(1.0, jac / (2.0 * config.anchor_jaccard_floor));
        return 0.5 * ratio_fit + 0.5 * jac_fit;
    };

    struct Candidate {
        double score;
        std::size_t index;  // pairs blocks[index] and blocks[index+1]
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i + 1 < blocks.size(); ++i)
        candidates.push_back({pair_score(blocks[i], blocks[i + 1]), i});
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.index < b.index;  // earliest block wins ties
    });

    std::vector<bool> used(blocks.size(), false);
    double score_sum = 0.0;
    std::size_t paired_blocks = 0, accepted = 0;
    for (const Candidate& c : candidates) {
        if (c.score < config.parallel_block_pair_score_min) break;
        if (used[c.index] || used[c.index + 1]) continue;
        used[c.index] = used[c.index + 1] = true;
        paired_blocks += 2;
        score_sum += c.score;
        ++accepted;
    }
    const double paired_fraction =
        blocks.empty() ? 0.0 : static_cast<double>(paired_blocks) / blocks.size();
    const double mean_score = accepted > 0 ? score_sum / accepted : 0.0;

    if (accepted > 0 && paired_fraction >= config.parallel_paired_fraction_min &&
        mean_score >= config.parallel_block_pair_score_min) {
        result.category = BilingualCategory::Parallel;
        result.confidence = std::min(1.0, mean_score);
        return result;
    }

    // Miscellaneous: every minority block is short and shares no anchors
    // with any majority block.
    const std::string minority_lang =
        evidence.partner_tokens <= evidence.pivot_tokens ? pair.partner : pair.pivot;
    bool all_minority_short = true;
    double max_cross_jaccard = 0.0;
    for (const LangBlock& minority : blocks) {
        if (minority.language != minority_lang) continue;
        if (minority.token_count > config.misc_max_minority_block_tokens)
            all_minority_short = false;
        for (const LangBlock& majority : blocks) {
            if (majority.language == minority_lang) continue;
            max_cross_jaccard = std::max(max_cross_jaccard, anchor_jaccard(minority, majority));
        }
    }
    if (all_minority_short && max_cross_jaccard < config.anchor_jaccard_floor) {
        result.category = BilingualCategory::Miscellaneous;
        double margin = config.anchor_jaccard_floor > 0
                            ? 1.0 - max_cross_jaccard / config.anchor_jaccard_floor
                            : 1.0;
        result.confidence = 0.5 + 0.5 * std::clamp(margin, 0.0, 1.0);
        return result;
    }

    result.category = BilingualCategory::CodeSwitching;
    result.confidence = 0.5 + 0.5 * std::clamp(1.0 - paired_fraction, 0.0, 1.0);
    return result;
}

// ---- Remote judge ----

namespace {

constexpr const char* kPlaceholder = "{document}";

std::string render_prompt(const std::string& tmpl, const std::string& text) {
    auto pos = tmpl.find(kPlaceholder);
    std::string out = tmpl;
    out.replace(pos, std::string(kPlaceholder).size(), text);
    return out;
}

bool placeholder_once(const std::string& tmpl) {
    auto first = tmpl.find(kPlaceholder);
    if (first == std::string::npos) return false;
    return tmpl.find(kPlaceholder, first + 1) == std::string::npos;
}

struct ParsedEndpoint {
    std::string base;  // scheme://host:port
    std::string path;
};

std::optional<ParsedEndpoint> parse_endpoint(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) return std::nullopt;
    auto path_begin = url.find('/', scheme_end + 3);
    ParsedEndpoint ep;
    if (path_begin == std::string::npos) {
        ep.base = url;
        ep.path = "/";
    } else {
        ep.base = url.substr(0, path_begin);
        ep.path = url.substr(path_begin);
    }
    return ep;
}

// Chat-completion shaped responses are the expected contract; plain
// text bodies are accepted as a fallback.
std::string extract_content(const std::string& body) {
    nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_object()) {
        if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
            const auto& choice = j["choices"][0];
            if (choice.contains("message") && choice["message"].contains("content") &&
                choice["message"]["content"].is_string())
                return choice["message"]["content"].get<std::string>();
            if (choice.contains("text") && choice["text"].is_string())
                return choice["text"].get<std::string>();
        }
        if (j.contains("content") && j["content"].is_string())
            return j["content"].get<std::string>();
    }
    return body;
}

// One round trip with retry/backoff; retries cover transport failures,
// 5xx responses, and responses the parser rejects. Empty optional when
// exhausted (or on 4xx, which will not improve with retries).
template <typename Parser>
auto request_with_retries(const JudgeConfig& judge, const ParsedEndpoint& ep,
                          const std::string& prompt, Parser parse, std::string* failure)
    -> decltype(parse(std::string{})) {
    nlohmann::json payload = {
        {"model", judge.model_name},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
    };
    const std::string body = payload.dump();

    int backoff_ms = judge.backoff_initial_ms;
    for (int attempt = 0; attempt <= judge.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
            backoff_ms *= 2;
        }
        httplib::Client client(ep.base);
        client.set_connection_timeout(judge.timeout_seconds, 0);
        client.set_read_timeout(judge.timeout_seconds, 0);
        auto res = client.Post(ep.path, body, "application/json");
        if (!res) {
            if (failure) *failure = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            if (failure) *failure = "server error " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            if (failure) *failure = "unexpected status " + std::to_string(res->status);
            return std::nullopt;
        }
        auto parsed = parse(extract_content(res->body));
        if (parsed) return parsed;
        if (failure) *failure = "unparseable judge response";
    }
    return std::nullopt;
}

std::optional<bool> parse_verify(const std::string& content) {
    const bool yes = content.find("YES") != std::string::npos;
    const bool no = content.find("NO") != std::string::npos;
    if (yes == no) return std::nullopt;
    return yes;
}

std::optional<BilingualCategory> parse_category(const std::string& content) {
    const bool parallel = content.find("PARALLEL") != std::string::npos;
    const bool cs = content.find("CODE_SWITCHING") != std::string::npos;
    const bool misc = content.find("MISCELLANEOUS") != std::string::npos;
    if (parallel + cs + misc != 1) return std::nullopt;
    if (parallel) return BilingualCategory::Parallel;
    if (cs) return BilingualCategory::CodeSwitching;
    return BilingualCategory::Miscellaneous;
}

}  // namespace

bool JudgeConfig::templates_valid() const {
    return placeholder_once(verify_prompt_template) && placeholder_once(classify_prompt_template);
}

JudgeConfig JudgeConfig::with_default_prompts() {
    JudgeConfig judge;
    judge.verify_prompt_template =
        "You are given a web document. Decide whether it contains substantial "
        "content in two different languages. Answer with a single token: YES or NO.\n\n"
        "Document:\n{document}";
    judge.classify_prompt_template =
        "The following document contains content in two languages. Decide how the two "
        "languages relate and answer with exactly one token:\n"
        "PARALLEL - one language translates the other in aligned segments\n"
        "CODE_SWITCHING - the languages are semantically related but not translations\n"
        "MISCELLANEOUS - the languages co-occur without a meaningful relationship "
        "(boilerplate, ads, navigation)\n\n"
        "Document:\n{document}";
    return judge;
}

JudgeOutcome classify_remote(const Document& doc, const JudgeConfig& judge) {
    JudgeOutcome outcome;
    if (!judge.templates_valid()) {
        outcome.failure = "judge prompt template must contain {document} exactly once";
        return outcome;
    }
    auto ep = parse_endpoint(judge.endpoint_url);
    if (!ep) {
        outcome.failure = "malformed judge endpoint: " + judge.endpoint_url;
        return outcome;
    }

    if (judge.delegate_verify) {
        auto verdict = request_with_retries(judge, *ep,
                                            render_prompt(judge.verify_prompt_template, doc.text),
                                            parse_verify, &outcome.failure);
        if (!verdict) return outcome;
        if (!*verdict) {
            outcome.resolved = true;
            outcome.verified = false;
            return outcome;
        }
    }

    auto category = request_with_retries(judge, *ep,
                                         render_prompt(judge.classify_prompt_template, doc.text),
                                         parse_category, &outcome.failure);
    if (!category) return outcome;
    outcome.resolved = true;
    outcome.verified = true;
    outcome.classification.category = *category;
    outcome.classification.confidence = 1.0;
    return outcome;
}

Stage2Summary run_stage2(std::vector<Document>& docs, const LanguagePair& pair,
                         const LangIdModel& model, Stage2Mode mode,
                         const ClassifierConfig& config, const std::optional<JudgeConfig>& judge,
                         int workers) {
    if (mode != Stage2Mode::Heuristic && !judge)
        throw std::runtime_error("remote classification requires a judge config");
    if (workers < 1) workers = 1;
    const SegmenterConfig& seg_config = default_segmenter_config();

    auto resolve = [&](Document& doc, Stage2Summary& summary) {
        if (!doc.annotations || doc.annotations->label != BilingualLabel::Candidate) return;
        ++summary.candidates;
        AnnotationBlock& ann = *doc.annotations;

        auto apply_heuristic = [&] {
            SpanEvidence evidence = collect_span_evidence(doc, pair, model, seg_config);
            ann.classifier_source = ClassifierSource::Heuristic;
            if (!verify_bilingual(evidence, config)) {
                ann.label = BilingualLabel::Monolingual;
                ann.category_confidence.reset();
                ++summary.reverted_monolingual;
                return;
            }
            Classification cls = classify_heuristic(evidence, pair, config);
            ann.label = category_to_label(cls.category);
            ann.category_confidence = cls.confidence;
            switch (cls.category) {
                case BilingualCategory::Parallel: ++summary.parallel; break;
                case BilingualCategory::CodeSwitching: ++summary.code_switching; break;
                case BilingualCategory::Miscellaneous: ++summary.miscellaneous; break;
            }
        };

        if (mode == Stage2Mode::Heuristic) {
            apply_heuristic();
            return;
        }

        JudgeConfig jc = *judge;
        if (!jc.delegate_verify) {
            // Step 1 stays local when the judge only classifies.
            SpanEvidence evidence = collect_span_evidence(doc, pair, model, seg_config);
            if (!verify_bilingual(evidence, config)) {
                ann.label = BilingualLabel::Monolingual;
                ann.classifier_source = ClassifierSource::Heuristic;
                ann.category_confidence.reset();
                ++summary.reverted_monolingual;
                return;
            }
        }
        JudgeOutcome outcome = classify_remote(doc, jc);
        if (outcome.resolved) {
            ann.classifier_source = ClassifierSource::RemoteJudge;
            if (!outcome.verified) {
                ann.label = BilingualLabel::Monolingual;
                ann.category_confidence.reset();
                ++summary.reverted_monolingual;
                return;
            }
            ann.label = category_to_label(outcome.classification.category);
            ann.category_confidence = outcome.classification.confidence;
            switch (outcome.classification.category) {
                case BilingualCategory::Parallel: ++summary.parallel; break;
                case BilingualCategory::CodeSwitching: ++summary.code_switching; break;
                case BilingualCategory::Miscellaneous: ++summary.miscellaneous; break;
            }
            return;
        }
        if (mode == Stage2Mode::RemoteWithHeuristicFallback) {
            apply_heuristic();
            return;
        }
        ann.label = BilingualLabel::CandidateUnresolved;
        ann.reason = outcome.failure;
        ann.category_confidence.reset();
        ++summary.unresolved;
    };

    Stage2Summary summary;
    if (workers == 1 || docs.size() < 2) {
        for (Document& doc : docs) resolve(doc, summary);
        return summary;
    }
    std::vector<std::future<Stage2Summary>> futures;
    const std::size_t chunk = (docs.size() + workers - 1) / workers;
    for (std::size_t begin = 0; begin < docs.size(); begin += chunk) {
        std::size_t end = std::min(begin + chunk, docs.size());
        futures.push_back(std::async(std::launch::async, [&, begin, end] {
            Stage2Summary partial;
            for (std::size_t i = begin; i < end; ++i) resolve(docs[i], partial);
            return partial;
        }));
    }
    for (auto& f : futures) {
        Stage2Summary partial = f.get();
        summary.candidates += partial.candidates;
        summary.reverted_monolingual += partial.reverted_monolingual;
        summary.parallel += partial.parallel;
        summary.code_switching += partial.code_switching;
        summary.miscellaneous += partial.miscellaneous;
        summary.unresolved += partial.unresolved;
    }
    return summary;
}

}  // namespace lingmix
