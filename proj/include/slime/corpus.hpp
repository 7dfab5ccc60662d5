#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace slime {

// One labeled transcript. label: 0 = control, 1 = AD. tokens is always
// tokenize(text); loaders populate it, nothing else mutates it.
struct document {
    std::string id;
    int label = 0;
    std::string text;
    std::vector<std::string> tokens;
    nlohmann::json meta;  // optional object, e.g. {"age": 67, "sex": "f"}

    bool operator==(const document&) const = default;
};

struct corpus {
    std::vector<document> documents;

    std::array<std::size_t, 2> class_counts() const {
        std::array<std::size_t, 2> counts{0, 0};
        for (const auto& d : documents) counts[static_cast<std::size_t>(d.label)]++;
        return counts;
    }

    bool operator==(const corpus&) const = default;
};

enum class corpus_format { plain_dir, jsonl };

// Lowercased word tokens split on Unicode whitespace; punctuation marks come
// out as their own single-codepoint tokens. Idempotent on its own output
// joined by spaces.
std::vector<std::string> tokenize(std::string_view text);

// Documents are returned sorted by id so every seeded procedure downstream
// sees the same order.
corpus load_corpus(const std::filesystem::path& path, corpus_format format);

void save_corpus_jsonl(const corpus& c, const std::filesystem::path& path);

struct fold_plan {
    int k = 0;
    std::map<std::string, int> assignments;  // document id -> fold in [0, k)
};

// Stratified k-fold assignment: fold sizes within 1 of each other overall and
// per label class. Deterministic for a given seed.
fold_plan kfold_split(const corpus& c, int k, std::uint64_t seed);

}  // namespace slime
