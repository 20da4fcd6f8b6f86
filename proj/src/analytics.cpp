#include "lingmix/analytics.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace lingmix {

namespace {

bool is_bilingual_label(BilingualLabel label) {
    return label == BilingualLabel::Parallel || label == BilingualLabel::CodeSwitching ||
           label == BilingualLabel::Miscellaneous;
}

BilingualLabel doc_label(const Document& doc) {
    return doc.annotations ? doc.annotations->label : BilingualLabel::Monolingual;
}

// Multi-label public suffixes beyond plain TLDs; a pragmatic subset of
// the public suffix list covering the sources this tool meets.
const std::unordered_set<std::string>& two_level_suffixes() {
    static const std::unordered_set<std::string> suffixes = {
        "co.uk", "org.uk", "ac.uk", "gov.uk", "me.uk",
        "com.au", "net.au", "org.au", "edu.au", "gov.au",
        "com.br", "net.br", "org.br",
        "co.jp", "ne.jp", "or.jp", "ac.jp", "go.jp",
        "com.mx", "org.mx", "gob.mx",
        "com.ar", "org.ar",
        "co.nz", "org.nz", "govt.nz",
        "co.in", "org.in", "gov.in", "ac.in",
        "com.cn", "org.cn", "edu.cn", "gov.cn",
        "co.za", "org.za", "gov.za",
        "com.tr", "org.tr",
        "gc.ca", "qc.ca", "on.ca", "bc.ca",
        "com.es", "org.es", "gob.es",
        "gouv.fr", "asso.fr", "com.fr",
        "co.kr", "or.kr", "ac.kr",
        "com.sg", "edu.sg",
        "com.hk", "org.hk",
        "com.tw", "org.tw",
    };
    return suffixes;
}

std::string to_lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string gen_class_name(GenLangClass c) {
    switch (c) {
        case GenLangClass::Target: return "target";
        case GenLangClass::Source: return "source";
        case GenLangClass::Mixed: return "mixed";
    }
    return "source";
}

}  // namespace

void CompositionReport::merge(const CompositionReport& other) {
    total_docs += other.total_docs;
    bilingual_docs += other.bilingual_docs;
    for (const auto& [label, count] : other.category_counts) category_counts[label] += count;
    total_bilingual_share =
        total_docs > 0 ? static_cast<double>(bilingual_docs) / total_docs : 0.0;
    category_shares.clear();
    for (const auto& [label, count] : category_counts)
        category_shares[label] =
            bilingual_docs > 0 ? static_cast<double>(count) / bilingual_docs : 0.0;
}

CompositionReport composition_report(const std::vector<Document>& corpus,
                                     const LanguagePair& pair) {
    CompositionReport report;
    report.pair = pair;
    for (const Document& doc : corpus) {
        ++report.total_docs;
        BilingualLabel label = doc_label(doc);
        if (is_bilingual_label(label)) {
            ++report.bilingual_docs;
            ++report.category_counts[label];
        }
    }
    report.total_bilingual_share =
        report.total_docs > 0 ? static_cast<double>(report.bilingual_docs) / report.total_docs
                              : 0.0;
    for (const auto& [label, count] : report.category_counts)
        report.category_shares[label] =
            report.bilingual_docs > 0 ? static_cast<double>(count) / report.bilingual_docs : 0.0;
    return report;
}

std::string registrable_domain(std::string_view url) {
    if (url.empty()) return "(no-url)";
    std::string s(url);
    auto scheme = s.find("://");
    std::string host = scheme == std::string::npos ? s : s.substr(scheme + 3);
    if (auto slash = host.find('/'); slash != std::string::npos) host.resize(slash);
    if (auto at = host.find('@'); at != std::string::npos) host = host.substr(at + 1);
    if (auto colon = host.find(':'); colon != std::string::npos) host.resize(colon);
    host = to_lower(host);
    if (host.empty() || host.find('.') == std::string::npos) return "(invalid-url)";
    for (char c : host)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-'))
            return "(invalid-url)";

    std::vector<std::string> labels;
    std::size_t pos = 0;
    while (pos <= host.size()) {
        auto dot = host.find('.', pos);
        if (dot == std::string::npos) {
            labels.push_back(host.substr(pos));
            break;
        }
        labels.push_back(host.substr(pos, dot - pos));
        pos = dot + 1;
    }
    for (const std::string& label : labels)
        if (label.empty()) return "(invalid-url)";
    if (labels.size() < 2) return "(invalid-url)";

    const std::size_t n = labels.size();
    if (n >= 3) {
        std::string last_two = labels[n - 2] + "." + labels[n - 1];
        if (two_level_suffixes().count(last_two))
            return labels[n - 3] + "." + last_two;
    }
    return labels[n - 2] + "." + labels[n - 1];
}

DomainReport domain_report(const std::vector<Document>& corpus, int top_k) {
    DomainReport report;
    report.top_k = top_k;
    std::map<BilingualLabel, std::map<std::string, std::int64_t>> counts;
    std::map<BilingualLabel, std::int64_t> totals;
    for (const Document& doc : corpus) {
        BilingualLabel label = doc_label(doc);
        if (!is_bilingual_label(label)) continue;
        std::string domain = registrable_domain(doc.url ? *doc.url : "");
        ++counts[label][domain];
        ++totals[label];
    }
    for (const auto& [label, domain_counts] : counts) {
        std::vector<DomainEntry> entries;
        for (const auto& [domain, count] : domain_counts) {
            DomainEntry e;
            e.domain = domain;
            e.doc_count = count;
            e.share = static_cast<double>(count) / totals[label];
            entries.push_back(std::move(e));
        }
        std::sort(entries.begin(), entries.end(), [](const DomainEntry& a, const DomainEntry& b) {
            if (a.doc_count != b.doc_count) return a.doc_count > b.doc_count;
            return a.domain < b.domain;
        });
        if (static_cast<int>(entries.size()) > top_k) entries.resize(top_k);
        report.per_category[label] = std::move(entries);
    }
    return report;
}

GenLangClass classify_generation(std::string_view generated_text, const LanguagePair& pair,
                                 const LangIdModel& model, const GenLangThresholds& thresholds) {
    Document doc;
    doc.doc_id = "gen";
    doc.text = std::string(generated_text);
    bool all_space = true;
    for (char c : doc.text)
        if (!std::isspace(static_cast<unsigned char>(c))) { all_space = false; break; }
    if (all_space) return GenLangClass::Source;  // failed generation counts as source

    FilterConfig config;
    DocLangProfile profile = profile_document(doc, pair, model, config);
    if (profile.p_partner >= thresholds.theta_target) return GenLangClass::Target;
    if (profile.entropy > thresholds.tau_mixed) return GenLangClass::Mixed;
    return GenLangClass::Source;
}

GenLangReport gen_lang_rate(const std::vector<std::pair<std::string, std::string>>& outputs,
                            const LanguagePair& pair, const LangIdModel& model,
                            const GenLangThresholds& thresholds) {
    GenLangReport report;
    report.counts[GenLangClass::Target] = 0;
    report.counts[GenLangClass::Source] = 0;
    report.counts[GenLangClass::Mixed] = 0;
    for (const auto& [source_text, generated_text] : outputs) {
        (void)source_text;
        ++report.counts[classify_generation(generated_text, pair, model, thresholds)];
        ++report.sample_count;
    }
    for (const auto& [cls, count] : report.counts)
        report.rates[cls] =
            report.sample_count > 0 ? static_cast<double>(count) / report.sample_count : 0.0;
    return report;
}

std::string render_composition(const CompositionReport& report, bool machine) {
    if (machine) {
        nlohmann::json j;
        j["pair"] = report.pair.to_string();
        j["total_docs"] = report.total_docs;
        j["bilingual_docs"] = report.bilingual_docs;
        j["total_bilingual_share"] = report.total_bilingual_share;
        for (const auto& [label, count] : report.category_counts) {
            j["category_counts"][std::string(label_name(label))] = count;
            j["category_shares"][std::string(label_name(label))] = report.category_shares.at(label);
        }
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "Bilingual composition (" << report.pair.to_string() << ")\n";
    char buf[128];
    std::snprintf(buf, sizeof(buf), "  %-18s %10lld\n", "total docs",
                  static_cast<long long>(report.total_docs));
    out << buf;
    std::snprintf(buf, sizeof(buf), "  %-18s %10lld  (%.2f%%)\n", "bilingual",
                  static_cast<long long>(report.bilingual_docs),
                  100.0 * report.total_bilingual_share);
    out << buf;
    for (BilingualLabel label : {BilingualLabel::Parallel, BilingualLabel::CodeSwitching,
                                 BilingualLabel::Miscellaneous}) {
        auto it = report.category_counts.find(label);
        std::int64_t count = it == report.category_counts.end() ? 0 : it->second;
        double share = report.category_shares.count(label) ? report.category_shares.at(label) : 0.0;
        std::snprintf(buf, sizeof(buf), "  %-18s %10lld  (%.1f%% of bilingual)\n",
                      std::string(label_name(label)).c_str(), static_cast<long long>(count),
                      100.0 * share);
        out << buf;
    }
    return out.str();
}

std::string render_domains(const DomainReport& report, bool machine) {
    if (machine) {
        nlohmann::json j;
        j["top_k"] = report.top_k;
        for (const auto& [label, entries] : report.per_category) {
            nlohmann::json arr = nlohmann::json::array();
            for (const DomainEntry& e : entries)
                arr.push_back({{"domain", e.domain}, {"doc_count", e.doc_count}, {"share", e.share}});
            j["categories"][std::string(label_name(label))] = std::move(arr);
        }
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "Top source domains per category (doc-count shares)\n";
    char buf[160];
    for (const auto& [label, entries] : report.per_category) {
        out << label_name(label) << ":\n";
        for (const DomainEntry& e : entries) {
            std::snprintf(buf, sizeof(buf), "  %-40s %8lld  (%.1f%%)\n", e.domain.c_str(),
                          static_cast<long long>(e.doc_count), 100.0 * e.share);
            out << buf;
        }
    }
    return out.str();
}

std::string render_gen_lang(const GenLangReport& report, bool machine) {
    if (machine) {
        nlohmann::json j;
        j["sample_count"] = report.sample_count;
        for (const auto& [cls, count] : report.counts) {
            j["counts"][gen_class_name(cls)] = count;
            j["rates"][gen_class_name(cls)] = report.rates.at(cls);
        }
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "Generation language rates (" << report.sample_count << " outputs)\n";
    char buf[96];
    for (GenLangClass cls : {GenLangClass::Target, GenLangClass::Source, GenLangClass::Mixed}) {
        std::snprintf(buf, sizeof(buf), "  %-8s %8lld  (%.1f%%)\n", gen_class_name(cls).c_str(),
                      static_cast<long long>(report.counts.at(cls)),
                      100.0 * report.rates.at(cls));
        out << buf;
    }
    return out.str();
}

}  // namespace lingmix
