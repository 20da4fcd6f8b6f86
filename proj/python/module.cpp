#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lingmix/alignment.hpp"
#include "lingmix/analytics.hpp"
#include "lingmix/classifier.hpp"
#include "lingmix/entropy_filter.hpp"
#include "lingmix/langid.hpp"
#include "lingmix/segmenter.hpp"
#include "lingmix/synth.hpp"

namespace py = pybind11;
using namespace lingmix;

namespace {

LanguagePair pair_from(const std::string& s) {
    auto pair = LanguagePair::parse(s);
    if (!pair) throw py::value_error("expected a language pair like 'en-fr'");
    return *pair;
}

const LangIdModel& model_or_bundled(const LangIdModel* model) {
    return model ? *model : bundled_model();
}

EmbeddingMatrix matrix_from(const std::vector<std::vector<double>>& rows) {
    EmbeddingMatrix m;
    m.rows = static_cast<std::int64_t>(rows.size());
    m.cols = rows.empty() ? 0 : static_cast<std::int64_t>(rows[0].size());
    for (std::int64_t i = 0; i < m.rows; ++i) {
        if (static_cast<std::int64_t>(rows[i].size()) != m.cols)
            throw py::value_error("embedding rows must share one dimension");
        m.ids.push_back(std::to_string(i));
        m.values.insert(m.values.end(), rows[i].begin(), rows[i].end());
    }
    return m;
}

py::dict profile_to_dict(const DocLangProfile& profile, BilingualLabel label) {
    py::dict out;
    out["pair"] = profile.pair.to_string();
    out["p_pivot"] = profile.p_pivot;
    out["p_partner"] = profile.p_partner;
    out["entropy"] = profile.entropy;
    out["pair_mass"] = profile.pair_mass;
    out["sentence_count"] = profile.sentence_count;
    out["label"] = std::string(label_name(label));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bilingual-document detection and corpus analytics core";

    py::class_<LangIdModel>(m, "LangIdModel")
        .def_static("load", [](const std::string& path) { return LangIdModel::load(path); },
                    py::arg("path"))
        .def_static(
            "train",
            [](const std::map<std::string, std::string>& corpora, std::size_t vocab_cap) {
                std::vector<std::pair<std::string, std::string>> pairs(corpora.begin(),
                                                                       corpora.end());
                return LangIdModel::train(pairs, 1, 3, vocab_cap);
            },
            py::arg("corpora"), py::arg("vocab_cap") = 20000)
        .def("save", [](const LangIdModel& model, const std::string& path) { model.save(path); },
             py::arg("path"))
        .def_property_readonly("languages", &LangIdModel::languages)
        .def("score",
             [](const LangIdModel& model, const std::string& text) {
                 auto result = model.score_sentence(text);
                 py::dict out;
                 for (std::size_t i = 0; i < result.probs.size(); ++i)
                     out[py::str(model.languages()[i])] = result.probs[i];
                 return out;
             },
             py::arg("text"));

    m.def("bundled_model", &bundled_model, py::return_value_policy::reference,
          "The built-in en/de/es/fr model");

    m.def(
        "segment",
        [](const std::string& text) {
            py::list out;
            for (const auto& span : segment(text, default_segmenter_config()))
                out.append(py::make_tuple(span.text, span.length_weight));
            return out;
        },
        py::arg("text"), "Sentence spans as (text, token_weight) tuples");

    m.def(
        "profile",
        [](const std::string& text, const std::string& pair, double tau,
           const LangIdModel* model) {
            Document doc;
            doc.text = text;
            FilterConfig config;
            config.tau = tau;
            auto lp = pair_from(pair);
            auto prof = profile_document(doc, lp, model_or_bundled(model), config);
            return profile_to_dict(prof, label_candidate(prof, config));
        },
        py::arg("text"), py::arg("pair") = "en-fr", py::arg("tau") = 0.1,
        py::arg("model") = nullptr,
        "Length-weighted language distribution, entropy, and the stage-1 label");

    m.def(
        "classify",
        [](const std::string& text, const std::string& pair, const LangIdModel* model) {
            Document doc;
            doc.text = text;
            auto lp = pair_from(pair);
            const LangIdModel& m_ = model_or_bundled(model);
            FilterConfig filter;
            auto prof = profile_document(doc, lp, m_, filter);
            BilingualLabel label = label_candidate(prof, filter);
            py::dict out;
            out["confidence"] = py::none();
            if (label == BilingualLabel::Candidate) {
                auto evidence = collect_span_evidence(doc, lp, m_);
                if (!verify_bilingual(evidence, ClassifierConfig{})) {
                    label = BilingualLabel::Monolingual;
                } else {
                    auto cls = classify_heuristic(evidence, lp, ClassifierConfig{});
                    label = category_to_label(cls.category);
                    out["confidence"] = cls.confidence;
                }
            }
            out["label"] = std::string(label_name(label));
            out["entropy"] = prof.entropy;
            return out;
        },
        py::arg("text"), py::arg("pair") = "en-fr", py::arg("model") = nullptr,
        "Run both pipeline stages on one document");

    m.def(
        "p_at_1",
        [](const std::vector<std::vector<double>>& src, const std::vector<std::vector<double>>& tgt,
           const std::string& direction) {
            RetrievalDirection dir;
            if (direction == "src2tgt") dir = RetrievalDirection::SrcToTgt;
            else if (direction == "tgt2src") dir = RetrievalDirection::TgtToSrc;
            else throw py::value_error("direction must be 'src2tgt' or 'tgt2src'");
            return p_at_1(matrix_from(src), matrix_from(tgt), dir);
        },
        py::arg("src"), py::arg("tgt"), py::arg("direction") = "src2tgt",
        "Cosine P@1 over row-paired embedding matrices");

    m.def(
        "gen_lang_class",
        [](const std::string& generated, const std::string& pair, double theta_target,
           double tau_mixed, const LangIdModel* model) {
            GenLangThresholds thresholds{theta_target, tau_mixed};
            switch (classify_generation(generated, pair_from(pair), model_or_bundled(model),
                                        thresholds)) {
                case GenLangClass::Target: return "target";
                case GenLangClass::Source: return "source";
                case GenLangClass::Mixed: return "mixed";
            }
            return "source";
        },
        py::arg("generated"), py::arg("pair") = "en-fr", py::arg("theta_target") = 0.9,
        py::arg("tau_mixed") = 0.1, py::arg("model") = nullptr,
        "Classify one generated text as target / source / mixed");

    m.def(
        "synth_corpus",
        [](std::uint64_t seed, std::int64_t docs, const std::string& pair, double bilingual_rate) {
            SynthConfig config;
            config.seed = seed;
            config.doc_count = docs;
            config.pair = pair_from(pair);
            config.bilingual_rate = bilingual_rate;
            py::list out;
            for (const auto& doc : synth_corpus(config)) out.append(document_to_line(doc));
            return out;
        },
        py::arg("seed") = 1, py::arg("docs") = 1000, py::arg("pair") = "en-fr",
        py::arg("bilingual_rate") = 0.02,
        "Seeded synthetic corpus as a list of JSONL record strings");
}
