#include "lingmix/segmenter.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace lingmix {

namespace {

struct Codepoint {
    char32_t cp;
    std::size_t offset;  // byte offset of the first byte
};

// Forgiving UTF-8 decoder; invalid bytes come back as U+FFFD so malformed
// input degrades instead of aborting the stream.
std::vector<Codepoint> decode_utf8(std::string_view text) {
    std::vector<Codepoint> out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char b = static_cast<unsigned char>(text[i]);
        char32_t cp = 0xFFFD;
        std::size_t len = 1;
        if (b < 0x80) {
            cp = b;
        } else if ((b & 0xE0) == 0xC0 && i + 1 < text.size()) {
            cp = (b & 0x1Fu) << 6 | (static_cast<unsigned char>(text[i + 1]) & 0x3Fu);
            len = 2;
        } else if ((b & 0xF0) == 0xE0 && i + 2 < text.size()) {
            cp = (b & 0x0Fu) << 12 | (static_cast<unsigned char>(text[i + 1]) & 0x3Fu) << 6 |
                 (static_cast<unsigned char>(text[i + 2]) & 0x3Fu);
            len = 3;
        } else if ((b & 0xF8) == 0xF0 && i + 3 < text.size()) {
            cp = (b & 0x07u) << 18 | (static_cast<unsigned char>(text[i + 1]) & 0x3Fu) << 12 |
                 (static_cast<unsigned char>(text[i + 2]) & 0x3Fu) << 6 |
                 (static_cast<unsigned char>(text[i + 3]) & 0x3Fu);
            len = 4;
        }
        out.push_back({cp, i});
        i += len;
    }
    return out;
}

bool is_word_char(char32_t cp) {
    if (cp < 0x80) return std::isalnum(static_cast<unsigned char>(cp)) != 0;
    if (cp >= 0xA0 && cp <= 0xBF) return false;       // Latin-1 punctuation block
    if (cp == 0xD7 || cp == 0xF7) return false;       // multiplication / division signs
    if (cp >= 0x2000 && cp <= 0x206F) return false;   // general punctuation
    return true;
}

bool is_space(char32_t cp) {
    return cp == ' ' || cp == '\t' || cp == '\r' || cp == 0xA0 || cp == 0x2009;
}

bool is_terminator(char32_t cp) { return cp == '.' || cp == '!' || cp == '?' || cp == 0x2026; }

bool is_closing(char32_t cp) {
    return cp == '"' || cp == '\'' || cp == ')' || cp == ']' || cp == 0xBB || cp == 0x2019 ||
           cp == 0x201D;
}

bool is_upper(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return true;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return true;
    if (cp >= 0x100 && cp <= 0x17F) return (cp & 1u) == 0;  // Latin Extended-A pairs
    return false;
}

bool is_sentence_opener(char32_t cp) {
    if (is_upper(cp) || (cp >= '0' && cp <= '9')) return true;
    return cp == '"' || cp == '\'' || cp == '(' || cp == '[' || cp == 0xAB || cp == 0xA1 ||
           cp == 0xBF || cp == 0x2018 || cp == 0x201C;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// Token immediately preceding the codepoint at index `dot` (exclusive).
std::string preceding_token(const std::vector<Codepoint>& cps, std::string_view text,
                            std::size_t dot) {
    std::size_t end = dot;
    while (end > 0 && !is_word_char(cps[end - 1].cp)) {
        if (is_space(cps[end - 1].cp) || cps[end - 1].cp == '\n') return {};
        --end;
    }
    std::size_t begin = end;
    while (begin > 0 && is_word_char(cps[begin - 1].cp)) --begin;
    if (begin == end) return {};
    std::size_t byte_begin = cps[begin].offset;
    std::size_t byte_end = cps[end].offset;
    return ascii_lower(text.substr(byte_begin, byte_end - byte_begin));
}

// Byte offsets (relative to segment start) where each word token begins,
// plus total token count.
std::int64_t count_tokens_cp(const std::vector<Codepoint>& cps, std::size_t begin,
                             std::size_t end) {
    std::int64_t count = 0;
    bool in_word = false;
    for (std::size_t i = begin; i < end; ++i) {
        bool w = is_word_char(cps[i].cp);
        if (w && !in_word) ++count;
        in_word = w;
    }
    return count;
}

}  // namespace

std::int64_t count_word_tokens(std::string_view text) {
    auto cps = decode_utf8(text);
    return count_tokens_cp(cps, 0, cps.size());
}

std::unordered_set<std::string> load_abbreviations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open abbreviation list: " + path);
    std::unordered_set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        std::string entry = ascii_lower(line.substr(start));
        if (!entry.empty() && entry.back() == '.') entry.pop_back();
        if (!entry.empty()) out.insert(std::move(entry));
    }
    return out;
}

const SegmenterConfig& default_segmenter_config() {
    static const SegmenterConfig config = [] {
        SegmenterConfig c;
        static const char* kAbbrev[] = {
            // en
            "mr", "mrs", "ms", "dr", "prof", "rev", "hon", "st", "jr", "sr", "vs", "etc", "no",
            "inc", "ltd", "co", "corp", "dept", "fig", "al", "approx", "jan", "feb", "mar",
            "apr", "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec", "mt", "vol", "pp", "ca",
            "cf",
            // de
            "bzw", "evtl", "ggf", "inkl", "nr", "str", "usw", "vgl", "abs", "bsp", "zb", "bspw",
            "sog", "u.a", "d.h", "z.b",
            // es
            "sra", "srta", "dra", "av", "aprox", "dcha", "izda", "tel", "ud", "uds", "pág", "núm",
            // fr
            "mme", "mlle", "bd", "env", "ex", "max", "min", "tél", "réf",
        };
        for (const char* a : kAbbrev) c.abbreviations.insert(a);
        return c;
    }();
    return config;
}

std::vector<SentenceSpan> segment(std::string_view text, const SegmenterConfig& config) {
    std::vector<SentenceSpan> spans;
    if (text.empty()) return spans;
    auto cps = decode_utf8(text);
    const std::size_t n = cps.size();

    auto emit = [&](std::size_t cp_begin, std::size_t cp_end) {
        // Trim whitespace on both ends.
        while (cp_begin < cp_end &&
               (is_space(cps[cp_begin].cp) || cps[cp_begin].cp == '\n'))
            ++cp_begin;
        while (cp_end > cp_begin &&
               (is_space(cps[cp_end - 1].cp) || cps[cp_end - 1].cp == '\n'))
            --cp_end;
        if (cp_begin >= cp_end) return;

        // Enforce the max token bound, splitting at whitespace.
        std::size_t chunk_begin = cp_begin;
        while (chunk_begin < cp_end) {
            std::int64_t tokens = 0;
            bool in_word = false;
            std::size_t split_at = cp_end;
            for (std::size_t i = chunk_begin; i < cp_end; ++i) {
                bool w = is_word_char(cps[i].cp);
                if (w && !in_word) {
                    ++tokens;
                    if (tokens > config.max_span_tokens) {
                        split_at = i;
                        break;
                    }
                }
                in_word = w;
            }
            std::size_t chunk_end = split_at;
            if (split_at != cp_end) {
                // Back off to the whitespace boundary before the overflowing token.
                while (chunk_end > chunk_begin && !is_space(cps[chunk_end - 1].cp)) --chunk_end;
                if (chunk_end == chunk_begin) chunk_end = split_at;
            }

            std::int64_t weight = count_tokens_cp(cps, chunk_begin, chunk_end);
            if (weight >= 1) {
                std::size_t b = cps[chunk_begin].offset;
                std::size_t e = chunk_end < n ? cps[chunk_end].offset : text.size();
                // Drop trailing whitespace bytes inside the chunk.
                std::size_t trimmed_end = chunk_end;
                while (trimmed_end > chunk_begin && is_space(cps[trimmed_end - 1].cp)) --trimmed_end;
                e = trimmed_end < n ? cps[trimmed_end].offset : text.size();
                SentenceSpan span;
                span.byte_begin = b;
                span.byte_end = e;
                span.text = std::string(text.substr(b, e - b));
                span.length_weight = weight;
                spans.push_back(std::move(span));
            }
            chunk_begin = chunk_end;
            while (chunk_begin < cp_end && is_space(cps[chunk_begin].cp)) ++chunk_begin;
        }
    };

    std::size_t seg_begin = 0;
    for (std::size_t i = 0; i < n; ++i) {
        char32_t cp = cps[i].cp;
        if (cp == '\n') {
            emit(seg_begin, i);
            seg_begin = i + 1;
            continue;
        }
        if (!is_terminator(cp)) continue;

        // Consume a run of terminators ("...", "?!").
        std::size_t t_end = i + 1;
        while (t_end < n && is_terminator(cps[t_end].cp)) ++t_end;

        // Abbreviation / initial suppression applies to a lone period only.
        if (cp == '.' && t_end == i + 1) {
            std::string token = preceding_token(cps, text, i);
            if (!token.empty()) {
                bool single_cp = token.size() == 1 ||
                                 (token.size() == 2 && (static_cast<unsigned char>(token[0]) & 0x80));
                bool single_letter_initial =
                    single_cp && !std::isdigit(static_cast<unsigned char>(token[0]));
                if (single_letter_initial || config.abbreviations.count(token)) {
                    i = t_end - 1;
                    continue;
                }
            }
        }

        std::size_t j = t_end;
        while (j < n && is_closing(cps[j].cp)) ++j;
        std::size_t ws_begin = j;
        while (j < n && is_space(cps[j].cp)) ++j;
        if (j == ws_begin) {  // no whitespace after terminator
            i = t_end - 1;
            continue;
        }
        if (j < n && !is_sentence_opener(cps[j].cp)) {
            i = t_end - 1;
            continue;
        }
        emit(seg_begin, ws_begin);
        seg_begin = j;
        i = j > 0 ? j - 1 : 0;
    }
    emit(seg_begin, n);
    return spans;
}

}  // namespace lingmix
