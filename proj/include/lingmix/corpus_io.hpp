#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lingmix/document.hpp"

namespace lingmix {

// Streaming reader over a sharded line-delimited corpus. Documents come
// back in shard order, then line order. Malformed lines are surfaced as
// per-record errors, never as stream aborts; I/O failures throw.
// Shards ending in ".gz" are decompressed transparently.
class CorpusReader {
public:
    explicit CorpusReader(std::vector<std::string> shard_paths);
    ~CorpusReader();
    CorpusReader(CorpusReader&&) noexcept;
    CorpusReader& operator=(CorpusReader&&) noexcept;

    using Item = std::variant<Document, RecordError>;

    // nullopt at end of stream.
    std::optional<Item> next();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct WriteSummary {
    std::int64_t count = 0;
    std::int64_t bytes = 0;
};

// Writes documents one record per line, LF endings. On failure the
// partial output file is removed before the exception propagates.
// An out_path ending in ".gz" is gzip-compressed.
class CorpusWriter {
public:
    CorpusWriter(std::string out_path, bool include_annotations = true);
    ~CorpusWriter();
    CorpusWriter(CorpusWriter&&) noexcept;
    CorpusWriter& operator=(CorpusWriter&&) noexcept;

    void write(const Document& doc);
    // Flushes and closes; returns totals. The writer is unusable afterwards.
    WriteSummary finish();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Convenience: drain a full shard list into memory (errors collected).
std::vector<Document> read_corpus_all(const std::vector<std::string>& shard_paths,
                                      std::vector<RecordError>* errors = nullptr);

WriteSummary write_corpus_all(const std::vector<Document>& docs, const std::string& out_path,
                              bool include_annotations = true);

}  // namespace lingmix
