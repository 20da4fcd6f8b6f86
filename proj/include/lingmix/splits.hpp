#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lingmix/document.hpp"

namespace lingmix {

// The four ablation corpus configurations. Label sets are fixed:
//   fineweb            - everything
//   monoweb            - monolingual content only
//   monoweb_parallel   - monoweb plus parallel documents
//   monoweb_codeswitch - monoweb plus code-switching documents
// OutOfPair documents ride along in every split unless drop_out_of_pair
// is set; unresolved candidates stay in fineweb only.
struct SplitSpec {
    std::string name;
    std::set<BilingualLabel> included_labels;

    static SplitSpec by_name(const std::string& name, bool drop_out_of_pair = false);
    static std::vector<std::string> all_names();
};

struct SplitSummary {
    std::string name;
    std::int64_t doc_count = 0;
    std::int64_t token_count = 0;
};

// Streaming filter preserving input order. Documents must all carry a
// final label; a raw Candidate is a pipeline misuse and throws.
SplitSummary build_split(const std::vector<Document>& corpus, const SplitSpec& spec,
                         const std::string& out_path, bool strip_annotations = false);

struct LabelCounts {
    std::map<BilingualLabel, std::int64_t> counts;
    std::int64_t total = 0;

    static LabelCounts tally(const std::vector<Document>& corpus);
};

struct SplitAlgebraReport {
    bool ok = false;
    std::vector<std::string> violations;
};

// Checks |fineweb| = |monoweb| + category counts + unresolved and that
// the augmented splits differ from monoweb by exactly their category.
SplitAlgebraReport verify_split_algebra(const std::map<std::string, SplitSummary>& summaries,
                                        const LabelCounts& labels);

// Document-level check over the written split files: duplicate ids and
// set mismatches are reported with the offending doc_id.
SplitAlgebraReport verify_split_files(const std::map<std::string, std::string>& split_paths,
                                      const std::vector<Document>& corpus);

}  // namespace lingmix
