#include "lingmix/entropy_filter.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

namespace lingmix {

namespace {

double xlogx(double p) { return p > 0 ? p * std::log(p) : 0.0; }

}  // namespace

DocLangProfile profile_from_spans(const std::vector<ScoredSpan>& spans, const LanguagePair& pair,
                                  const FilterConfig& config) {
    DocLangProfile profile;
    profile.pair = pair;
    profile.sentence_count = static_cast<std::int64_t>(spans.size());

    double mass_pivot = 0, mass_partner = 0, mass_other = 0;
    for (const ScoredSpan& span : spans) {
        const double w = static_cast<double>(span.length_weight);
        double p_pivot = span.p_pivot;
        double p_partner = span.p_partner;
        if (config.normalize_before_aggregation) {
            double pair_sum = p_pivot + p_partner;
            if (pair_sum > 0) {
                p_pivot /= pair_sum;
                p_partner /= pair_sum;
            }
        }
        mass_pivot += w * p_pivot;
        mass_partner += w * p_partner;
        mass_other += w * span.p_other;
    }

    const double total = mass_pivot + mass_partner + mass_other;
    const double pair_sum = mass_pivot + mass_partner;
    if (spans.empty() || pair_sum <= 0) {
        profile.p_pivot = 1.0;
        profile.p_partner = 0.0;
        profile.entropy = 0.0;
        profile.pair_mass = 0.0;
        return profile;
    }
    profile.p_pivot = mass_pivot / pair_sum;
    profile.p_partner = mass_partner / pair_sum;
    profile.entropy = -(xlogx(profile.p_pivot) + xlogx(profile.p_partner));
    if (profile.entropy < 0) profile.entropy = 0;  // guard against -0.0 / rounding
    profile.pair_mass = total > 0 ? pair_sum / total : 0.0;
    return profile;
}

DocLangProfile profile_document(const Document& doc, const LanguagePair& pair,
                                const LangIdModel& model, const FilterConfig& config,
                                const SegmenterConfig& seg_config) {
    const int pivot_idx = model.language_index(pair.pivot);
    const int partner_idx = model.language_index(pair.partner);
    if (pivot_idx < 0 || partner_idx < 0)
        throw std::runtime_error("language pair " + pair.to_string() +
                                 " is not covered by the langid model");

    std::vector<SentenceSpan> spans = segment(doc.text, seg_config);
    std::vector<ScoredSpan> scored;
    scored.reserve(spans.size());
    for (const SentenceSpan& span : spans) {
        auto result = model.score_sentence(span.text);
        ScoredSpan s;
        s.length_weight = span.length_weight;
        s.p_pivot = result.probs[static_cast<std::size_t>(pivot_idx)];
        s.p_partner = result.probs[static_cast<std::size_t>(partner_idx)];
        double sum = 0;
        for (float p : result.probs) sum += p;
        s.p_other = sum - s.p_pivot - s.p_partner;
        if (s.p_other < 0) s.p_other = 0;
        scored.push_back(s);
    }
    return profile_from_spans(scored, pair, config);
}

BilingualLabel label_candidate(const DocLangProfile& profile, const FilterConfig& config) {
    if (profile.pair_mass < config.min_pair_mass) return BilingualLabel::OutOfPair;
    if (profile.entropy > config.tau) return BilingualLabel::Candidate;
    return BilingualLabel::Monolingual;
}

double Stage1Summary::candidate_rate() const {
    return doc_count > 0 ? static_cast<double>(candidate_count) / doc_count : 0.0;
}
double Stage1Summary::monolingual_rate() const {
    return doc_count > 0 ? static_cast<double>(monolingual_count) / doc_count : 0.0;
}
double Stage1Summary::out_of_pair_rate() const {
    return doc_count > 0 ? static_cast<double>(out_of_pair_count) / doc_count : 0.0;
}

void Stage1Summary::merge(const Stage1Summary& other) {
    doc_count += other.doc_count;
    candidate_count += other.candidate_count;
    monolingual_count += other.monolingual_count;
    out_of_pair_count += other.out_of_pair_count;
    error_count += other.error_count;
    text_bytes += other.text_bytes;
}

void annotate_stage1(Document& doc, const LanguagePair& pair, const LangIdModel& model,
                     const FilterConfig& config, const SegmenterConfig& seg_config) {
    AnnotationBlock ann;
    if (static_cast<std::int64_t>(doc.text.size()) > config.max_doc_bytes) {
        ann.label = BilingualLabel::OutOfPair;
        ann.reason = "oversize";
        doc.annotations = ann;
        return;
    }
    ann.profile = profile_document(doc, pair, model, config, seg_config);
    ann.label = label_candidate(*ann.profile, config);
    doc.annotations = ann;
}

Stage1Summary run_stage1(std::vector<Document>& docs, const LanguagePair& pair,
                         const LangIdModel& model, const FilterConfig& config, int workers) {
    if (workers < 1) workers = 1;
    const SegmenterConfig& seg_config = default_segmenter_config();

    auto process_range = [&](std::size_t begin, std::size_t end) {
        Stage1Summary partial;
        for (std::size_t i = begin; i < end; ++i) {
            Document& doc = docs[i];
            partial.text_bytes += static_cast<std::int64_t>(doc.text.size());
            ++partial.doc_count;
            try {
                annotate_stage1(doc, pair, model, config, seg_config);
            } catch (const std::exception&) {
                ++partial.error_count;
                continue;
            }
            switch (doc.annotations->label) {
                case BilingualLabel::Candidate: ++partial.candidate_count; break;
                case BilingualLabel::OutOfPair: ++partial.out_of_pair_count; break;
                default: ++partial.monolingual_count; break;
            }
        }
        return partial;
    };

    Stage1Summary summary;
    if (workers == 1 || docs.size() < 2) {
        summary = process_range(0, docs.size());
    } else {
        // Contiguous slices; documents are annotated in place so order is
        // preserved by construction.
        std::vector<std::future<Stage1Summary>> futures;
        const std::size_t chunk = (docs.size() + workers - 1) / workers;
        for (std::size_t begin = 0; begin < docs.size(); begin += chunk) {
            std::size_t end = std::min(begin + chunk, docs.size());
            futures.push_back(
                std::async(std::launch::async, [&, begin, end] { return process_range(begin, end); }));
        }
        for (auto& f : futures) summary.merge(f.get());
    }
    return summary;
}

}  // namespace lingmix
