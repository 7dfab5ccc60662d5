#include "slime/tagging.hpp"

#include <algorithm>
#include <cmath>

#include "slime/error.hpp"
#include "slime/util.hpp"

namespace slime {

const std::set<std::string>& default_excluded_categories() {
    static const std::set<std::string> names = {"WC",        "Analytic", "Clout",
                                                "Authentic", "Tone",     "WPS"};
    return names;
}

namespace {

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == ' ' || c == '\t') {
            if (!cur.empty()) {
                parts.push_back(std::move(cur));
                cur.clear();
            }
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(std::move(cur));
    return parts;
}

void merge_ids(std::vector<int>& dst, const std::vector<int>& src) {
    for (int id : src)
        if (std::find(dst.begin(), dst.end(), id) == dst.end()) dst.push_back(id);
    std::sort(dst.begin(), dst.end());
}

}  // namespace

category_dictionary category_dictionary::parse(const std::filesystem::path& path) {
    auto lines = read_lines(path);
    category_dictionary dict;

    enum { before_header, in_header, in_entries } state = before_header;
    std::map<std::string, std::vector<int>> merged;  // pattern -> ids

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string where = path.string() + ":" + std::to_string(i + 1);
        std::string line = trim(lines[i]);
        if (line.empty()) continue;
        if (line == "%") {
            if (state == before_header) {
                state = in_header;
            } else if (state == in_header) {
                if (dict.categories_.empty()) throw data_error(where + ": empty header");
                state = in_entries;
            } else {
                throw data_error(where + ": unexpected '%'");
            }
            continue;
        }
        auto parts = split_ws(line);
        if (state == before_header) throw data_error(where + ": expected '%' header delimiter");
        if (state == in_header) {
            if (parts.size() != 2) throw data_error(where + ": expected \"id<TAB>name\"");
            int id;
            try {
                id = std::stoi(parts[0]);
            } catch (const std::exception&) {
                throw data_error(where + ": category id is not an integer");
            }
            if (!dict.categories_.emplace(id, parts[1]).second)
                throw data_error(where + ": duplicate category id " + parts[0]);
        } else {
            if (parts.size() < 2)
                throw data_error(where + ": expected \"pattern<TAB>id [id...]\"");
            std::string pattern = lowercase_ascii(parts[0]);
            if (line.find(' ') != std::string::npos && parts.size() > 2) {
                // Could be a multiword expression; only digits after the
                // pattern are category ids.
            }
            std::size_t star = pattern.find('*');
            if (star != std::string::npos && star != pattern.size() - 1)
                throw data_error(where + ": wildcard only allowed in final position");
            if (pattern == "*" || pattern.empty())
                throw data_error(where + ": empty pattern");
            std::vector<int> ids;
            for (std::size_t p = 1; p < parts.size(); ++p) {
                int id;
                try {
                    id = std::stoi(parts[p]);
                } catch (const std::exception&) {
                    throw data_error(where +
                                     ": multiword dictionary expressions are not supported "
                                     "(token-level analysis only)");
                }
                if (!dict.categories_.count(id))
                    throw data_error(where + ": entry references unknown category id " +
                                     std::to_string(id));
                ids.push_back(id);
            }
            merge_ids(merged[pattern], ids);
        }
    }
    if (state == before_header) throw data_error(path.string() + ": empty header");
    if (state == in_header) throw data_error(path.string() + ": missing entry section");

    for (auto& [pattern, ids] : merged) {
        if (pattern.back() == '*')
            dict.stems_.emplace_back(pattern.substr(0, pattern.size() - 1), ids);
        else
            dict.literal_.emplace(pattern, ids);
    }
    std::sort(dict.stems_.begin(), dict.stems_.end());
    return dict;
}

std::set<std::string> category_dictionary::tag(const std::string& token) const {
    std::set<std::string> out;
    auto add_ids = [&](const std::vector<int>& ids) {
        for (int id : ids) {
            const std::string& name = categories_.at(id);
            if (!excluded_.count(name)) out.insert(name);
        }
    };
    if (auto it = literal_.find(token); it != literal_.end()) add_ids(it->second);
    // Matching stems are exactly the prefixes of `token` present in stems_;
    // all of them sort at or before `token` itself.
    auto it = std::upper_bound(stems_.begin(), stems_.end(), token,
                               [](const std::string& t, const auto& e) { return t < e.first; });
    while (it != stems_.begin()) {
        --it;
        if (token.compare(0, it->first.size(), it->first) == 0) {
            add_ids(it->second);
        } else if (it->first < token.substr(0, it->first.size())) {
            break;  // everything earlier is lexicographically below any prefix
        }
    }
    return out;
}

std::vector<std::string> category_dictionary::analyzed_categories() const {
    std::set<std::string> with_entries;
    for (const auto& [pattern, ids] : literal_)
        for (int id : ids) with_entries.insert(categories_.at(id));
    for (const auto& [stem, ids] : stems_)
        for (int id : ids) with_entries.insert(categories_.at(id));
    std::vector<std::string> out;
    for (const auto& name : with_entries)
        if (!excluded_.count(name)) out.push_back(name);
    return out;
}

std::vector<std::string> category_dictionary::reportable_categories() const {
    std::set<std::string> names;
    for (const auto& [id, name] : categories_)
        if (!excluded_.count(name)) names.insert(name);
    return {names.begin(), names.end()};
}

std::vector<token_record> tag_corpus(const attributed_corpus& ac,
                                     const category_dictionary& dict) {
    std::vector<token_record> records;
    for (const auto& doc : ac.documents) {
        if (doc.tokens.size() != doc.attributions.size())
            throw data_error("document '" + doc.id + "': " + std::to_string(doc.tokens.size()) +
                             " tokens but " + std::to_string(doc.attributions.size()) +
                             " attributions");
        for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
            if (!std::isfinite(doc.attributions[i]))
                throw data_error("document '" + doc.id + "': non-finite attribution at token " +
                                 std::to_string(i));
            token_record rec;
            rec.doc_id = doc.id;
            rec.position = i;
            rec.surface = doc.tokens[i];
            rec.attribution = doc.attributions[i];
            rec.categories = dict.tag(lowercase_ascii(doc.tokens[i]));
            rec.doc_label = doc.label;
            records.push_back(std::move(rec));
        }
    }
    return records;
}

}  // namespace slime
