#include "lingmix/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lingmix {

namespace {

std::vector<double> row_norms(const EmbeddingMatrix& m) {
    std::vector<double> norms(static_cast<std::size_t>(m.rows));
    for (std::int64_t i = 0; i < m.rows; ++i) {
        const double* r = m.row(i);
        double sq = 0;
        for (std::int64_t j = 0; j < m.cols; ++j) sq += r[j] * r[j];
        norms[static_cast<std::size_t>(i)] = std::sqrt(sq);
    }
    return norms;
}

constexpr const char* kTextMagic = "LINGMIX-EMB v1";
constexpr char kBinaryMagic[4] = {'L', 'M', 'E', 'B'};
constexpr std::uint32_t kBinaryVersion = 1;

}  // namespace

bool EmbeddingMatrix::finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

double p_at_1(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
              RetrievalDirection direction) {
    if (src.rows == 0 || tgt.rows == 0) throw std::runtime_error("empty embedding matrix");
    if (src.rows != tgt.rows)
        throw std::runtime_error("paired embedding matrices must have equal row counts (" +
                                 std::to_string(src.rows) + " vs " + std::to_string(tgt.rows) + ")");
    if (src.cols != tgt.cols)
        throw std::runtime_error("embedding dimension mismatch (" + std::to_string(src.cols) +
                                 " vs " + std::to_string(tgt.cols) + ")");

    const EmbeddingMatrix& queries = direction == RetrievalDirection::SrcToTgt ? src : tgt;
    const EmbeddingMatrix& candidates = direction == RetrievalDirection::SrcToTgt ? tgt : src;
    const std::vector<double> q_norms = row_norms(queries);
    const std::vector<double> c_norms = row_norms(candidates);

    std::int64_t hits = 0;
    for (std::int64_t q = 0; q < queries.rows; ++q) {
        const double* qv = queries.row(q);
        const double qn = q_norms[static_cast<std::size_t>(q)];
        double best = -2.0;
        std::int64_t best_idx = 0;
        for (std::int64_t c = 0; c < candidates.rows; ++c) {
            double sim = 0.0;
            const double cn = c_norms[static_cast<std::size_t>(c)];
            if (qn > 0 && cn > 0) {
                const double* cv = candidates.row(c);
                double dot = 0;
                for (std::int64_t j = 0; j < queries.cols; ++j) dot += qv[j] * cv[j];
                sim = dot / (qn * cn);
            }
            if (sim > best) {  // strict: ties keep the lowest index
                best = sim;
                best_idx = c;
            }
        }
        if (best_idx == q) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(queries.rows);
}

AlignmentReport layerwise_report(const std::vector<EmbeddingMatrix>& src_layers,
                                 const std::vector<EmbeddingMatrix>& tgt_layers) {
    if (src_layers.size() != tgt_layers.size())
        throw std::runtime_error("mismatched layer counts (" + std::to_string(src_layers.size()) +
                                 " vs " + std::to_string(tgt_layers.size()) + ")");
    AlignmentReport report;
    for (std::size_t i = 0; i < src_layers.size(); ++i) {
        LayerAlignment layer;
        layer.layer = src_layers[i].layer;
        layer.granularity = src_layers[i].granularity;
        layer.pair_count = src_layers[i].rows;
        layer.p_at_1_src_to_tgt = p_at_1(src_layers[i], tgt_layers[i], RetrievalDirection::SrcToTgt);
        layer.p_at_1_tgt_to_src = p_at_1(src_layers[i], tgt_layers[i], RetrievalDirection::TgtToSrc);
        layer.p_at_1_mean = 0.5 * (layer.p_at_1_src_to_tgt + layer.p_at_1_tgt_to_src);
        report.layers.push_back(std::move(layer));
    }
    return report;
}

void save_embeddings(const EmbeddingMatrix& m, const std::string& path) {
    const bool binary = path.size() > 4 && path.compare(path.size() - 4, 4, ".bin") == 0;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open embedding file for writing: " + path);
    if (static_cast<std::int64_t>(m.ids.size()) != m.rows)
        throw std::runtime_error("embedding id count does not match row count");
    if (static_cast<std::int64_t>(m.values.size()) != m.rows * m.cols)
        throw std::runtime_error("embedding value count does not match shape");

    if (binary) {
        out.write(kBinaryMagic, 4);
        auto put_u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
        put_u32(kBinaryVersion);
        put_u32(static_cast<std::uint32_t>(m.rows));
        put_u32(static_cast<std::uint32_t>(m.cols));
        put_u32(static_cast<std::uint32_t>(m.layer));
        std::uint32_t gran = m.granularity == "lexical" ? 1 : 0;
        put_u32(gran);
        for (const std::string& id : m.ids) {
            put_u32(static_cast<std::uint32_t>(id.size()));
            out.write(id.data(), static_cast<std::streamsize>(id.size()));
        }
        out.write(reinterpret_cast<const char*>(m.values.data()),
                  static_cast<std::streamsize>(m.values.size() * sizeof(double)));
    } else {
        out << kTextMagic << "\n";
        out << m.rows << ' ' << m.cols << ' ' << m.layer << ' ' << m.granularity << "\n";
        for (const std::string& id : m.ids) out << id << "\n";
        char buf[32];
        for (std::int64_t i = 0; i < m.rows; ++i) {
            const double* r = m.row(i);
            for (std::int64_t j = 0; j < m.cols; ++j) {
                std::snprintf(buf, sizeof(buf), "%.17g", r[j]);
                out << (j ? " " : "") << buf;
            }
            out << "\n";
        }
    }
    out.close();
    if (out.fail()) throw std::runtime_error("write failure on embedding file: " + path);
}

EmbeddingMatrix load_embeddings(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open embedding file: " + path);
    auto fail = [&](const std::string& what) -> std::runtime_error {
        return std::runtime_error("invalid embedding file \"" + path + "\": " + what);
    };

    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4) throw fail("truncated header");
    EmbeddingMatrix m;
    if (std::memcmp(magic, kBinaryMagic, 4) == 0) {
        auto get_u32 = [&]() {
            std::uint32_t v = 0;
            in.read(reinterpret_cast<char*>(&v), 4);
            if (in.gcount() != 4) throw fail("truncated");
            return v;
        };
        if (get_u32() != kBinaryVersion) throw fail("unsupported version");
        m.rows = get_u32();
        m.cols = get_u32();
        m.layer = static_cast<int>(get_u32());
        m.granularity = get_u32() == 1 ? "lexical" : "sentence";
        if (m.rows < 1 || m.cols < 1) throw fail("degenerate shape");
        for (std::int64_t i = 0; i < m.rows; ++i) {
            std::uint32_t len = get_u32();
            std::string id(len, '\0');
            in.read(id.data(), len);
            if (in.gcount() != static_cast<std::streamsize>(len)) throw fail("truncated id list");
            m.ids.push_back(std::move(id));
        }
        m.values.resize(static_cast<std::size_t>(m.rows * m.cols));
        in.read(reinterpret_cast<char*>(m.values.data()),
                static_cast<std::streamsize>(m.values.size() * sizeof(double)));
        if (in.gcount() != static_cast<std::streamsize>(m.values.size() * sizeof(double)))
            throw fail("truncated values");
    } else {
        in.seekg(0);
        std::string line;
        if (!std::getline(in, line) || line != kTextMagic) throw fail("bad header");
        if (!std::getline(in, line)) throw fail("missing shape line");
        std::istringstream shape(line);
        if (!(shape >> m.rows >> m.cols >> m.layer >> m.granularity)) throw fail("bad shape line");
        if (m.rows < 1 || m.cols < 1) throw fail("degenerate shape");
        for (std::int64_t i = 0; i < m.rows; ++i) {
            if (!std::getline(in, line)) throw fail("truncated id list");
            m.ids.push_back(line);
        }
        m.values.reserve(static_cast<std::size_t>(m.rows * m.cols));
        for (std::int64_t i = 0; i < m.rows; ++i) {
            if (!std::getline(in, line)) throw fail("truncated values");
            std::istringstream row(line);
            for (std::int64_t j = 0; j < m.cols; ++j) {
                double v;
                if (!(row >> v)) throw fail("short row " + std::to_string(i));
                m.values.push_back(v);
            }
        }
    }
    if (!m.finite()) throw fail("non-finite values");
    return m;
}

std::string render_alignment(const AlignmentReport& report, bool machine) {
    if (machine) {
        nlohmann::json j;
        nlohmann::json arr = nlohmann::json::array();
        for (const LayerAlignment& l : report.layers)
            arr.push_back({{"layer", l.layer},
                           {"granularity", l.granularity},
                           {"pairs", l.pair_count},
                           {"p_at_1_src_to_tgt", l.p_at_1_src_to_tgt},
                           {"p_at_1_tgt_to_src", l.p_at_1_tgt_to_src},
                           {"p_at_1_mean", l.p_at_1_mean}});
        j["layers"] = std::move(arr);
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "Layer-wise alignment (P@1, cosine)\n";
    out << "layer  granularity  pairs   src->tgt  tgt->src  mean\n";
    char buf[128];
    for (const LayerAlignment& l : report.layers) {
        std::snprintf(buf, sizeof(buf), "%5d  %-11s %6lld   %8.4f  %8.4f  %6.4f\n", l.layer,
                      l.granularity.c_str(), static_cast<long long>(l.pair_count),
                      l.p_at_1_src_to_tgt, l.p_at_1_tgt_to_src, l.p_at_1_mean);
        out << buf;
    }
    return out.str();
}

}  // namespace lingmix
