#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lingmix {

// N x D row-major embedding matrix with row labels.
struct EmbeddingMatrix {
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    int layer = 0;
    std::string granularity = "sentence";  // or "lexical"
    std::vector<std::string> ids;
    std::vector<double> values;  // rows * cols

    const double* row(std::int64_t i) const { return values.data() + i * cols; }
    bool finite() const;
};

enum class RetrievalDirection { SrcToTgt, TgtToSrc };

// P@1 under cosine similarity: row i of src is paired with row i of tgt;
// a hit means the argmax-cosine candidate is the paired row. Ties go to
// the lowest index; zero-norm rows have similarity 0 to everything.
double p_at_1(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
              RetrievalDirection direction);

struct LayerAlignment {
    int layer = 0;
    std::string granularity;
    std::int64_t pair_count = 0;
    double p_at_1_src_to_tgt = 0.0;
    double p_at_1_tgt_to_src = 0.0;
    double p_at_1_mean = 0.0;  // headline number
};

struct AlignmentReport {
    std::vector<LayerAlignment> layers;
};

AlignmentReport layerwise_report(const std::vector<EmbeddingMatrix>& src_layers,
                                 const std::vector<EmbeddingMatrix>& tgt_layers);

// Embedding container, text ("LINGMIX-EMB v1 text") and binary
// ("LMEB" magic) variants; the suffix ".bin" selects binary on save.
void save_embeddings(const EmbeddingMatrix& m, const std::string& path);
EmbeddingMatrix load_embeddings(const std::string& path);

std::string render_alignment(const AlignmentReport& report, bool machine);

}  // namespace lingmix
