#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "slime/attribution.hpp"

namespace slime {

// Six LIWC categories that depend on whole-text context and are meaningless
// per token; excluded from every analysis by default.
const std::set<std::string>& default_excluded_categories();

class category_dictionary {
public:
    // dic format: '%', header lines "id<TAB>name", '%', then entry lines
    // "pattern<TAB>id [id...]". A trailing '*' on a pattern matches any token
    // with that prefix. Single-token patterns only.
    static category_dictionary parse(const std::filesystem::path& path);

    const std::map<int, std::string>& categories() const { return categories_; }
    const std::set<std::string>& excluded() const { return excluded_; }
    void set_excluded(std::set<std::string> names) { excluded_ = std::move(names); }

    // Union of categories over all matching entries, minus the excluded set.
    std::set<std::string> tag(const std::string& token) const;

    // Non-excluded category names, sorted. With entries: the universe that
    // count-based tests are corrected over; all: what analyze_all reports.
    std::vector<std::string> analyzed_categories() const;  // >= 1 entry
    std::vector<std::string> reportable_categories() const;  // every header row

    std::size_t entry_count() const { return literal_.size() + stems_.size(); }

private:
    std::map<int, std::string> categories_;
    std::set<std::string> excluded_ = default_excluded_categories();
    std::unordered_map<std::string, std::vector<int>> literal_;
    std::vector<std::pair<std::string, std::vector<int>>> stems_;  // sorted by stem
};

// One token occurrence joined with its attribution and category tags.
struct token_record {
    std::string doc_id;
    std::size_t position = 0;
    std::string surface;
    double attribution = 0.0;
    std::set<std::string> categories;
    int doc_label = 0;
};

// One record per token occurrence, in document order then position order.
std::vector<token_record> tag_corpus(const attributed_corpus& ac,
                                     const category_dictionary& dict);

}  // namespace slime
