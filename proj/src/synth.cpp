#include "lingmix/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lingmix {

namespace {

struct WordPool {
    std::vector<std::string> words;        // general vocabulary
    std::vector<std::string> short_words;  // < 6 chars, anchor-free boilerplate
};

const WordPool& pool_for(const std::string& lang) {
    static const WordPool en = {
        {"the", "of", "and", "to", "in", "is", "was", "for", "with", "that", "this", "from",
         "they", "have", "which", "market", "garden", "house", "window", "morning", "people",
         "children", "water", "school", "street", "report", "quick", "brown", "fox", "jumps",
         "over", "lazy", "dog", "city", "weather", "winter", "summer", "music", "history",
         "government", "company", "building", "mountain", "river", "friends", "evening",
         "kitchen", "little", "always", "together", "because", "between", "during", "thought",
         "village", "station", "library", "teacher", "question", "answer", "holiday", "journey",
         "picture", "found", "near", "old", "new", "small", "large", "walked", "looked", "under",
         "after", "before", "about", "their", "where", "when", "many", "some", "most", "other"},
        {"the", "of", "and", "to", "in", "is", "was", "for", "with", "that", "this", "from",
         "they", "have", "old", "new", "near", "some", "many", "when", "where", "about"}};
    static const WordPool de = {
        {"der", "die", "das", "und", "ist", "in", "mit", "für", "von", "auf", "ein", "eine",
         "nicht", "haus", "garten", "morgen", "kinder", "wasser", "schule", "straße", "stadt",
         "wetter", "winter", "sommer", "musik", "geschichte", "regierung", "unternehmen",
         "gebäude", "berg", "fluss", "freunde", "abend", "küche", "klein", "immer", "zusammen",
         "weil", "zwischen", "während", "gedanke", "dorf", "bahnhof", "bibliothek", "lehrer",
         "frage", "antwort", "urlaub", "reise", "bild", "heute", "schön", "sehr", "auch", "aber",
         "wenn", "dann", "wird", "werden", "können", "müssen", "gefunden", "nahe", "alte",
         "neue", "kleine", "große", "ging", "sah", "unter", "nach", "vor", "über", "ihre"},
        {"der", "die", "das", "und", "ist", "in", "mit", "für", "von", "auf", "ein", "eine",
         "nicht", "auch", "aber", "wenn", "dann", "sehr", "nahe", "alte", "neue"}};
    static const WordPool es = {
        {"el", "los", "las", "de", "un", "una", "y", "es", "en", "con", "para", "por", "casa",
         "jardín", "mañana", "niños", "agua", "escuela", "calle", "ciudad", "tiempo", "invierno",
         "verano", "música", "historia", "gobierno", "empresa", "edificio", "montaña", "río",
         "amigos", "noche", "cocina", "pequeño", "siempre", "juntos", "porque", "entre",
         "durante", "pensamiento", "pueblo", "estación", "biblioteca", "maestro", "pregunta",
         "respuesta", "vacaciones", "viaje", "imagen", "hoy", "bonito", "muy", "también", "pero",
         "cuando", "entonces", "será", "encontraron", "cerca", "viejo", "nuevo", "grande",
         "caminó", "miró", "bajo", "después", "antes", "sobre", "donde", "muchos", "algunos"},
        {"el", "los", "las", "de", "un", "una", "y", "es", "en", "con", "para", "por", "muy",
         "pero", "hoy", "cerca", "viejo", "nuevo", "bajo", "donde"}};
    static const WordPool fr = {
        {"le", "la", "les", "de", "des", "du", "un", "une", "et", "est", "dans", "sur", "avec",
         "pour", "que", "qui", "chat", "assis", "table", "près", "fenêtre", "maison", "jardin",
         "matin", "enfants", "eau", "école", "rue", "ville", "temps", "hiver", "été", "musique",
         "histoire", "gouvernement", "entreprise", "bâtiment", "montagne", "rivière", "amis",
         "soir", "cuisine", "petit", "toujours", "ensemble", "parce", "entre", "pendant",
         "pensée", "village", "gare", "bibliothèque", "professeur", "question", "réponse",
         "vacances", "voyage", "image", "trouvé", "vieux", "nouveau", "grand", "marché",
         "regardé", "sous", "après", "avant", "leurs", "où", "quand", "beaucoup", "quelques",
         "vous", "devez", "cliquer", "ici", "voir", "cette", "merci", "votre", "visite",
         "bonne", "journée", "version", "dernière", "page"},
        {"le", "la", "les", "de", "des", "du", "un", "une", "et", "est", "dans", "sur", "avec",
         "pour", "que", "qui", "vous", "devez", "ici", "voir", "cette", "merci", "votre",
         "bonne", "page"}};
    if (lang == "en") return en;
    if (lang == "de") return de;
    if (lang == "es") return es;
    if (lang == "fr") return fr;
    throw std::runtime_error("no built-in vocabulary for language \"" + lang + "\"");
}

const std::vector<std::string> kNames = {"Martin",  "Dubois", "Laurent", "Claire",
                                         "Bernard", "Moreau", "Rousseau", "Lefevre",
                                         "Weber",   "Garcia", "Keller",   "Navarro"};

std::string capitalize(std::string word) {
    if (!word.empty() && word[0] >= 'a' && word[0] <= 'z') word[0] -= 32;
    return word;
}

using Rng = std::mt19937_64;

std::string pick(const std::vector<std::string>& v, Rng& rng) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

// A sentence with an exact word-token count. Anchors (numbers / names)
// are spliced into the interior so the language signal stays dominant.
std::string make_sentence(const std::string& lang, Rng& rng, int token_count,
                          const std::vector<std::string>& anchors = {}, bool short_words = false) {
    const WordPool& pool = pool_for(lang);
    const std::vector<std::string>& vocab = short_words ? pool.short_words : pool.words;
    int plain = token_count - static_cast<int>(anchors.size());
    if (plain < 1) plain = 1;
    std::vector<std::string> tokens;
    tokens.reserve(static_cast<std::size_t>(plain) + anchors.size());
    for (int i = 0; i < plain; ++i) tokens.push_back(pick(vocab, rng));
    // Interior positions only; the first token carries the capital.
    for (const std::string& anchor : anchors) {
        std::size_t at = 1 + std::uniform_int_distribution<std::size_t>(0, tokens.size() - 1)(rng);
        if (at > tokens.size()) at = tokens.size();
        tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(at), anchor);
    }
    tokens[0] = capitalize(tokens[0]);
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    out.push_back('.');
    return out;
}

std::string make_paragraph(const std::string& lang, Rng& rng, int sentences, int min_tokens,
                           int max_tokens) {
    std::string out;
    std::uniform_int_distribution<int> len(min_tokens, max_tokens);
    for (int i = 0; i < sentences; ++i) {
        if (i) out.push_back(' ');
        out += make_sentence(lang, rng, len(rng));
    }
    return out;
}

std::string number_token(Rng& rng) {
    return std::to_string(std::uniform_int_distribution<int>(100, 9999)(rng));
}

std::string mono_text(const LanguagePair& pair, Rng& rng) {
    const std::string& lang = std::uniform_int_distribution<int>(0, 1)(rng) ? pair.partner
                                                                            : pair.pivot;
    int sentences = std::uniform_int_distribution<int>(4, 8)(rng);
    std::string text = make_paragraph(lang, rng, sentences, 8, 14);
    return text;
}

// Alternating pivot/partner block pairs with matched token counts and
// shared number/name anchors.
std::string parallel_text(const LanguagePair& pair, Rng& rng) {
    int pairs = std::uniform_int_distribution<int>(3, 5)(rng);
    std::string out;
    for (int p = 0; p < pairs; ++p) {
        std::vector<std::string> anchors = {number_token(rng), number_token(rng),
                                            pick(kNames, rng), pick(kNames, rng)};
        std::uniform_int_distribution<int> len(10, 13);
        int len_a = len(rng), len_b = len(rng);
        for (const std::string& lang : {pair.pivot, pair.partner}) {
            std::string block =
                make_sentence(lang, rng, len_a, {anchors[0], anchors[2]}) + " " +
                make_sentence(lang, rng, len_b, {anchors[1], anchors[3]});
            if (!out.empty()) out.push_back('\n');
            out += block;
        }
    }
    return out;
}

// Long pivot narrative plus one substantial partner block; token ratio
// outside the pairing band and no shared anchors.
std::string code_switching_text(const LanguagePair& pair, Rng& rng) {
    std::string out = make_paragraph(pair.pivot, rng, 6, 14, 16);
    out.push_back('\n');
    out += make_paragraph(pair.partner, rng, 3, 13, 14);
    if (std::uniform_int_distribution<int>(0, 1)(rng)) {
        out.push_back('\n');
        out += make_paragraph(pair.pivot, rng, 2, 12, 14);
    }
    return out;
}

// Pivot article with a short trailing partner boilerplate block built
// from short anchor-free words.
std::string miscellaneous_text(const LanguagePair& pair, Rng& rng) {
    std::string out = make_paragraph(pair.pivot, rng, 5, 11, 13);
    out.push_back('\n');
    std::uniform_int_distribution<int> len(6, 8);
    out += make_sentence(pair.partner, rng, len(rng), {}, /*short_words=*/true);
    out.push_back(' ');
    out += make_sentence(pair.partner, rng, len(rng), {}, /*short_words=*/true);
    return out;
}

std::string url_for(const std::string& category, const std::string& doc_id, Rng& rng) {
    static const std::vector<std::string> mono = {"daily-news.com", "wiki-notes.org",
                                                  "city-blog.net", "open-lessons.org"};
    static const std::vector<std::string> parallel = {"thesis-portal.org", "dictlearn.net",
                                                      "stayplaces.com"};
    static const std::vector<std::string> cs = {"pinboard-social.com", "forum-echange.fr",
                                                "shopreviews.fr"};
    static const std::vector<std::string> misc = {"widget-ads.net", "nav-boiler.com"};
    const std::vector<std::string>* domains = &mono;
    if (category == "parallel") domains = &parallel;
    else if (category == "code_switching") domains = &cs;
    else if (category == "miscellaneous") domains = &misc;
    return "https://www." + pick(*domains, rng) + "/" + doc_id;
}

}  // namespace

std::string builtin_training_corpus(const std::string& lang) {
    pool_for(lang);  // validates the language up front
    Rng rng(0x1176C0DE ^ std::hash<std::string>{}(lang));
    std::string out;
    out.reserve(120000);
    std::int64_t tokens = 0;
    std::uniform_int_distribution<int> len(6, 14);
    while (tokens < 14000) {
        int n = len(rng);
        out += make_sentence(lang, rng, n);
        out.push_back(tokens % 90 < 10 ? '\n' : ' ');
        tokens += n;
    }
    return out;
}

const std::vector<std::string>& builtin_languages() {
    static const std::vector<std::string> langs = {"en", "de", "es", "fr"};
    return langs;
}

const LangIdModel& bundled_model() {
    static const LangIdModel model = [] {
        std::vector<std::pair<std::string, std::string>> corpora;
        for (const std::string& lang : builtin_languages())
            corpora.emplace_back(lang, builtin_training_corpus(lang));
        return LangIdModel::train(corpora);
    }();
    return model;
}

std::vector<Document> synth_corpus(const SynthConfig& config) {
    if (config.doc_count < 0) throw std::runtime_error("doc_count must be non-negative");
    Rng rng(config.seed);

    const std::int64_t bilingual =
        static_cast<std::int64_t>(std::llround(config.bilingual_rate * config.doc_count));
    double mix_total =
        config.parallel_share + config.code_switching_share + config.miscellaneous_share;
    if (mix_total <= 0) mix_total = 1;
    const std::int64_t n_parallel =
        static_cast<std::int64_t>(std::llround(bilingual * config.parallel_share / mix_total));
    const std::int64_t n_misc =
        static_cast<std::int64_t>(std::llround(bilingual * config.miscellaneous_share / mix_total));
    const std::int64_t n_cs = bilingual - n_parallel - n_misc;

    std::vector<std::string> categories;
    categories.reserve(static_cast<std::size_t>(config.doc_count));
    for (std::int64_t i = 0; i < n_parallel; ++i) categories.push_back("parallel");
    for (std::int64_t i = 0; i < n_cs; ++i) categories.push_back("code_switching");
    for (std::int64_t i = 0; i < n_misc; ++i) categories.push_back("miscellaneous");
    while (static_cast<std::int64_t>(categories.size()) < config.doc_count)
        categories.push_back("monolingual");
    std::shuffle(categories.begin(), categories.end(), rng);

    std::vector<Document> docs;
    docs.reserve(categories.size());
    for (std::size_t i = 0; i < categories.size(); ++i) {
        const std::string& category = categories[i];
        Document doc;
        char idbuf[32];
        std::snprintf(idbuf, sizeof(idbuf), "doc-%06zu", i);
        doc.doc_id = idbuf;
        if (category == "parallel") doc.text = parallel_text(config.pair, rng);
        else if (category == "code_switching") doc.text = code_switching_text(config.pair, rng);
        else if (category == "miscellaneous") doc.text = miscellaneous_text(config.pair, rng);
        else doc.text = mono_text(config.pair, rng);
        doc.url = url_for(category, doc.doc_id, rng);
        doc.extra["planted"] = category;
        docs.push_back(std::move(doc));
    }
    return docs;
}

std::vector<std::pair<std::string, std::string>> synth_outputs(std::uint64_t seed,
                                                               std::int64_t count,
                                                               const LanguagePair& pair,
                                                               double target_rate,
                                                               double mixed_rate) {
    Rng rng(seed);
    const std::int64_t n_target = static_cast<std::int64_t>(std::llround(target_rate * count));
    const std::int64_t n_mixed = static_cast<std::int64_t>(std::llround(mixed_rate * count));

    std::vector<int> kinds;  // 0 target, 1 mixed, 2 source
    for (std::int64_t i = 0; i < n_target; ++i) kinds.push_back(0);
    for (std::int64_t i = 0; i < n_mixed; ++i) kinds.push_back(1);
    while (static_cast<std::int64_t>(kinds.size()) < count) kinds.push_back(2);
    std::shuffle(kinds.begin(), kinds.end(), rng);

    std::vector<std::pair<std::string, std::string>> outputs;
    outputs.reserve(kinds.size());
    for (int kind : kinds) {
        std::string source = make_paragraph(pair.pivot, rng, 2, 8, 12);
        std::string generated;
        switch (kind) {
            case 0: generated = make_paragraph(pair.partner, rng, 2, 8, 12); break;
            case 1:
                generated = make_sentence(pair.partner, rng, 10) + " " +
                            make_sentence(pair.pivot, rng, 10);
                break;
            default: generated = source; break;
        }
        outputs.emplace_back(std::move(source), std::move(generated));
    }
    return outputs;
}

}  // namespace lingmix
