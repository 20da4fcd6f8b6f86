#include "lingmix/corpus_io.hpp"

#include <zlib.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace lingmix {

namespace {

bool has_gz_suffix(const std::string& path) {
    return path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

// Line source over a plain or gzip shard. gzFile handles both, but plain
// ifstream avoids the zlib passthrough overhead for the common case.
class LineSource {
public:
    explicit LineSource(const std::string& path) : path_(path) {
        if (!std::filesystem::exists(path))
            throw std::runtime_error("corpus shard not found: " + path);
        if (has_gz_suffix(path)) {
            gz_ = gzopen(path.c_str(), "rb");
            if (!gz_) throw std::runtime_error("cannot open corpus shard: " + path);
            gzbuffer(gz_, 1 << 18);
        } else {
            stream_.open(path, std::ios::binary);
            if (!stream_) throw std::runtime_error("cannot open corpus shard: " + path);
        }
    }

    ~LineSource() {
        if (gz_) gzclose(gz_);
    }

    bool next_line(std::string& line) {
        if (gz_) return next_gz_line(line);
        return static_cast<bool>(std::getline(stream_, line));
    }

private:
    bool next_gz_line(std::string& line) {
        line.clear();
        while (true) {
            auto nl = buf_.find('\n', pos_);
            if (nl != std::string::npos) {
                line.append(buf_, pos_, nl - pos_);
                pos_ = nl + 1;
                return true;
            }
            line.append(buf_, pos_, buf_.size() - pos_);
            buf_.resize(1 << 16);
            pos_ = 0;
            int n = gzread(gz_, buf_.data(), static_cast<unsigned>(buf_.size()));
            if (n < 0) throw std::runtime_error("gzip read error in shard: " + path_);
            buf_.resize(static_cast<size_t>(n));
            if (n == 0) return !line.empty();
        }
    }

    std::string path_;
    std::ifstream stream_;
    gzFile gz_ = nullptr;
    std::string buf_;
    size_t pos_ = 0;
};

}  // namespace

struct CorpusReader::Impl {
    std::vector<std::string> paths;
    size_t shard_index = 0;
    std::int64_t line_number = 0;
    std::unique_ptr<LineSource> source;
    std::string line;
};

CorpusReader::CorpusReader(std::vector<std::string> shard_paths)
    : impl_(std::make_unique<Impl>()) {
    impl_->paths = std::move(shard_paths);
}

CorpusReader::~CorpusReader() = default;
CorpusReader::CorpusReader(CorpusReader&&) noexcept = default;
CorpusReader& CorpusReader::operator=(CorpusReader&&) noexcept = default;

std::optional<CorpusReader::Item> CorpusReader::next() {
    for (;;) {
        if (!impl_->source) {
            if (impl_->shard_index >= impl_->paths.size()) return std::nullopt;
            impl_->source = std::make_unique<LineSource>(impl_->paths[impl_->shard_index]);
            impl_->line_number = 0;
        }
        if (!impl_->source->next_line(impl_->line)) {
            impl_->source.reset();
            ++impl_->shard_index;
            continue;
        }
        ++impl_->line_number;
        if (impl_->line.empty()) continue;  // tolerate blank lines
        std::string err;
        if (auto doc = document_from_line(impl_->line, &err)) return Item(std::move(*doc));
        RecordError rec_err;
        rec_err.shard = impl_->paths[impl_->shard_index];
        rec_err.line_number = impl_->line_number;
        rec_err.message = err;
        return Item(std::move(rec_err));
    }
}

struct CorpusWriter::Impl {
    std::string path;
    bool include_annotations = true;
    std::ofstream stream;
    gzFile gz = nullptr;
    WriteSummary summary;
    bool finished = false;

    void cleanup_partial() {
        if (gz) {
            gzclose(gz);
            gz = nullptr;
        }
        if (stream.is_open()) stream.close();
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
};

CorpusWriter::CorpusWriter(std::string out_path, bool include_annotations)
    : impl_(std::make_unique<Impl>()) {
    impl_->path = std::move(out_path);
    impl_->include_annotations = include_annotations;
    if (has_gz_suffix(impl_->path)) {
        impl_->gz = gzopen(impl_->path.c_str(), "wb");
        if (!impl_->gz) throw std::runtime_error("cannot open output file: " + impl_->path);
    } else {
        impl_->stream.open(impl_->path, std::ios::binary | std::ios::trunc);
        if (!impl_->stream) throw std::runtime_error("cannot open output file: " + impl_->path);
    }
}

CorpusWriter::~CorpusWriter() {
    if (impl_ && !impl_->finished) impl_->cleanup_partial();
}

CorpusWriter::CorpusWriter(CorpusWriter&&) noexcept = default;
CorpusWriter& CorpusWriter::operator=(CorpusWriter&&) noexcept = default;

void CorpusWriter::write(const Document& doc) {
    std::string line = document_to_line(doc, impl_->include_annotations);
    line.push_back('\n');
    if (impl_->gz) {
        if (gzwrite(impl_->gz, line.data(), static_cast<unsigned>(line.size())) <= 0) {
            impl_->cleanup_partial();
            throw std::runtime_error("write failure on " + impl_->path);
        }
    } else {
        impl_->stream.write(line.data(), static_cast<std::streamsize>(line.size()));
        if (!impl_->stream) {
            impl_->cleanup_partial();
            throw std::runtime_error("write failure on " + impl_->path);
        }
    }
    ++impl_->summary.count;
    impl_->summary.bytes += static_cast<std::int64_t>(line.size());
}

WriteSummary CorpusWriter::finish() {
    if (impl_->gz) {
        int rc = gzclose(impl_->gz);
        impl_->gz = nullptr;
        if (rc != Z_OK) {
            impl_->cleanup_partial();
            throw std::runtime_error("close failure on " + impl_->path);
        }
    } else {
        impl_->stream.close();
        if (impl_->stream.fail()) {
            impl_->cleanup_partial();
            throw std::runtime_error("close failure on " + impl_->path);
        }
    }
    impl_->finished = true;
    return impl_->summary;
}

std::vector<Document> read_corpus_all(const std::vector<std::string>& shard_paths,
                                      std::vector<RecordError>* errors) {
    CorpusReader reader(shard_paths);
    std::vector<Document> docs;
    while (auto item = reader.next()) {
        if (std::holds_alternative<Document>(*item)) {
            docs.push_back(std::move(std::get<Document>(*item)));
        } else if (errors) {
            errors->push_back(std::move(std::get<RecordError>(*item)));
        }
    }
    return docs;
}

WriteSummary write_corpus_all(const std::vector<Document>& docs, const std::string& out_path,
                              bool include_annotations) {
    CorpusWriter writer(out_path, include_annotations);
    for (const Document& doc : docs) writer.write(doc);
    return writer.finish();
}

}  // namespace lingmix
