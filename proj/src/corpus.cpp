#include "slime/corpus.hpp"

#include <algorithm>
#include <set>

#include "slime/error.hpp"
#include "slime/rng.hpp"
#include "slime/util.hpp"

namespace slime {

namespace {

// Decodes the UTF-8 sequence starting at s[i]; advances i past it.
// Throws on malformed input.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
    unsigned char b0 = static_cast<unsigned char>(s[i]);
    auto cont = [&](std::size_t off) {
        if (i + off >= s.size()) throw data_error("invalid UTF-8: truncated sequence");
        unsigned char b = static_cast<unsigned char>(s[i + off]);
        if ((b & 0xC0) != 0x80) throw data_error("invalid UTF-8: bad continuation byte");
        return static_cast<char32_t>(b & 0x3F);
    };
    if (b0 < 0x80) {
        i += 1;
        return b0;
    }
    if ((b0 & 0xE0) == 0xC0) {
        char32_t cp = (char32_t(b0 & 0x1F) << 6) | cont(1);
        if (cp < 0x80) throw data_error("invalid UTF-8: overlong sequence");
        i += 2;
        return cp;
    }
    if ((b0 & 0xF0) == 0xE0) {
        char32_t cp = (char32_t(b0 & 0x0F) << 12) | (cont(1) << 6) | cont(2);
        if (cp < 0x800) throw data_error("invalid UTF-8: overlong sequence");
        i += 3;
        return cp;
    }
    if ((b0 & 0xF8) == 0xF0) {
        char32_t cp = (char32_t(b0 & 0x07) << 18) | (cont(1) << 12) | (cont(2) << 6) | cont(3);
        if (cp < 0x10000 || cp > 0x10FFFF) throw data_error("invalid UTF-8: bad code point");
        i += 4;
        return cp;
    }
    throw data_error("invalid UTF-8: bad lead byte");
}

void encode_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

bool is_space_cp(char32_t c) {
    switch (c) {
        case U'\t': case U'\n': case U'\v': case U'\f': case U'\r': case U' ':
        case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return c >= 0x2000 && c <= 0x200A;
    }
}

bool is_punct_cp(char32_t c) {
    if (c < 0x80)
        return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') ||
               (c >= '[' && c <= '`') || (c >= '{' && c <= '~');
    switch (c) {
        case 0xA1: case 0xAB: case 0xB7: case 0xBB: case 0xBF:
        case 0x2018: case 0x2019: case 0x201C: case 0x201D:
        case 0x2026: case 0x2039: case 0x203A:
            return true;
        default:
            return c >= 0x2010 && c <= 0x2015;  // hyphens and dashes
    }
}

char32_t lower_cp(char32_t c) {
    if (c >= U'A' && c <= U'Z') return c + 32;
    // Latin-1 uppercase block, skipping the multiplication sign.
    if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
    return c;
}

void validate_label(long label, const std::string& id) {
    if (label != 0 && label != 1)
        throw data_error("document '" + id + "': label " + std::to_string(label) +
                         " outside {0,1}");
}

void finalize(corpus& c, const std::string& where) {
    if (c.documents.empty()) throw data_error("empty corpus: " + where);
    std::sort(c.documents.begin(), c.documents.end(),
              [](const document& a, const document& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < c.documents.size(); ++i)
        if (c.documents[i].id == c.documents[i - 1].id)
            throw data_error("duplicate document id '" + c.documents[i].id + "'");
    for (auto& d : c.documents) d.tokens = tokenize(d.text);
}

corpus load_plain_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw data_error("not a directory: " + dir.string());

    std::map<std::string, int> labels;
    const auto labels_path = dir / "labels.csv";
    auto lines = read_lines(labels_path);
    if (lines.empty() || csv_split(lines[0]) != std::vector<std::string>{"id", "label"})
        throw data_error(labels_path.string() + ": expected header \"id,label\"");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        auto fields = csv_split(lines[i]);
        if (fields.size() != 2)
            throw data_error(labels_path.string() + ":" + std::to_string(i + 1) +
                             ": expected two fields");
        long label;
        try {
            label = std::stol(fields[1]);
        } catch (const std::exception&) {
            throw data_error(labels_path.string() + ":" + std::to_string(i + 1) +
                             ": label is not an integer");
        }
        validate_label(label, fields[0]);
        if (!labels.emplace(fields[0], static_cast<int>(label)).second)
            throw data_error("duplicate label row for id '" + fields[0] + "'");
    }

    corpus c;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
        document d;
        d.id = entry.path().stem().string();
        auto it = labels.find(d.id);
        if (it == labels.end())
            throw data_error("missing label for document '" + d.id + "'");
        d.label = it->second;
        d.text = read_file(entry.path());
        c.documents.push_back(std::move(d));
    }
    finalize(c, dir.string());
    return c;
}

corpus load_jsonl(const std::filesystem::path& path) {
    corpus c;
    auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(lines[i]);
        } catch (const nlohmann::json::exception& e) {
            throw data_error(path.string() + ":" + std::to_string(i + 1) + ": " + e.what());
        }
        if (!j.is_object() || !j.contains("id") || !j["id"].is_string())
            throw data_error(path.string() + ":" + std::to_string(i + 1) +
                             ": expected object with string \"id\"");
        document d;
        d.id = j["id"].get<std::string>();
        if (!j.contains("label") || !j["label"].is_number_integer())
            throw data_error("missing label for document '" + d.id + "'");
        long label = j["label"].get<long>();
        validate_label(label, d.id);
        d.label = static_cast<int>(label);
        if (!j.contains("text") || !j["text"].is_string())
            throw data_error("document '" + d.id + "': missing \"text\"");
        d.text = j["text"].get<std::string>();
        if (j.contains("meta")) {
            if (!j["meta"].is_object())
                throw data_error("document '" + d.id + "': \"meta\" must be an object");
            d.meta = j["meta"];
        }
        c.documents.push_back(std::move(d));
    }
    finalize(c, path.string());
    return c;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string word;
    std::size_t i = 0;
    while (i < text.size()) {
        char32_t cp = decode_utf8(text, i);
        if (is_space_cp(cp)) {
            if (!word.empty()) {
                tokens.push_back(std::move(word));
                word.clear();
            }
        } else if (is_punct_cp(cp)) {
            if (!word.empty()) {
                tokens.push_back(std::move(word));
                word.clear();
            }
            std::string p;
            encode_utf8(cp, p);
            tokens.push_back(std::move(p));
        } else {
            encode_utf8(lower_cp(cp), word);
        }
    }
    if (!word.empty()) tokens.push_back(std::move(word));
    return tokens;
}

corpus load_corpus(const std::filesystem::path& path, corpus_format format) {
    if (!std::filesystem::exists(path)) throw data_error("path does not exist: " + path.string());
    return format == corpus_format::plain_dir ? load_plain_dir(path) : load_jsonl(path);
}

void save_corpus_jsonl(const corpus& c, const std::filesystem::path& path) {
    std::string out;
    for (const auto& d : c.documents) {
        nlohmann::json j;
        j["id"] = d.id;
        j["label"] = d.label;
        j["text"] = d.text;
        if (!d.meta.is_null()) j["meta"] = d.meta;
        out += j.dump();
        out += '\n';
    }
    write_file(path, out);
}

fold_plan kfold_split(const corpus& c, int k, std::uint64_t seed) {
    if (k < 2) throw usage_error("k must be >= 2, got " + std::to_string(k));
    std::array<std::vector<std::size_t>, 2> by_label;
    for (std::size_t i = 0; i < c.documents.size(); ++i)
        by_label[static_cast<std::size_t>(c.documents[i].label)].push_back(i);
    for (int label = 0; label < 2; ++label)
        if (by_label[label].size() < static_cast<std::size_t>(k))
            throw usage_error("class " + std::to_string(label) + " has " +
                              std::to_string(by_label[label].size()) +
                              " documents, fewer than k=" + std::to_string(k));

    fold_plan plan;
    plan.k = k;
    std::vector<int> totals(static_cast<std::size_t>(k), 0);
    rng r(seed);
    for (int label = 0; label < 2; ++label) {
        auto docs = by_label[static_cast<std::size_t>(label)];
        r.shuffle(docs);
        // Greedy: rarest class count first, then smallest fold, then index.
        // Keeps per-class counts and overall sizes within 1 across folds.
        std::vector<int> class_counts(static_cast<std::size_t>(k), 0);
        for (std::size_t doc : docs) {
            int best = 0;
            for (int f = 1; f < k; ++f) {
                auto fi = static_cast<std::size_t>(f);
                auto bi = static_cast<std::size_t>(best);
                if (class_counts[fi] < class_counts[bi] ||
                    (class_counts[fi] == class_counts[bi] && totals[fi] < totals[bi]))
                    best = f;
            }
            auto bi = static_cast<std::size_t>(best);
            class_counts[bi]++;
            totals[bi]++;
            plan.assignments[c.documents[doc].id] = best;
        }
    }
    return plan;
}

}  // namespace slime
