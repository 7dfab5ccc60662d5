#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "slime/corpus.hpp"
#include "slime/matrix.hpp"

namespace slime {

// Embedding -> mean pool -> linear -> logistic. Row 0 of the embedding table
// is the reserved unknown row, held at zero so an out-of-vocabulary token
// embeds as "absent" (the attribution baseline).
struct model_params {
    std::map<std::string, int> vocab;  // token -> embedding row, rows start at 1
    int dim = 0;
    std::vector<double> embeddings;  // (vocab.size()+1) x dim, row-major
    std::vector<double> head_weights;  // dim
    double head_bias = 0.0;

    std::size_t rows() const { return embeddings.size() / static_cast<std::size_t>(dim); }

    int token_row(const std::string& token) const {
        auto it = vocab.find(token);
        return it == vocab.end() ? 0 : it->second;
    }

    std::span<const double> row(int r) const {
        return {embeddings.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(dim),
                static_cast<std::size_t>(dim)};
    }
};

struct train_config {
    double learning_rate = 1e-2;
    double weight_decay = 0.0;
    double adam_eps = 1e-8;
    int epochs = 200;
    int batch_size = 1;
    int max_tokens = 512;
    int embedding_dim = 16;
    std::uint64_t seed = 0;
};

// Token embeddings of the first min(|tokens|, max_tokens) tokens.
matrix embed_tokens(const model_params& params, std::span<const std::string> tokens,
                    int max_tokens);

// F(x) in (0,1). Throws on an empty or non-finite input.
double forward(const model_params& params, const matrix& token_embeddings);

// dF/dx for every embedding entry; closed form F(1-F) * w_dim / n.
matrix grad_embeddings(const model_params& params, const matrix& token_embeddings);

double bce_with_logits(double logit, int label);

struct fold_result {
    int fold = 0;
    model_params params;
    double val_accuracy = 0.0;
};

// One model per fold, trained on the other k-1 folds with AdamW on the
// binary-cross-entropy-with-logits loss, evaluated at threshold 0.5 on the
// held-out fold. Single-threaded and bit-reproducible for a fixed seed.
std::vector<fold_result> train(const corpus& c, const fold_plan& folds,
                               const train_config& cfg);

// Highest validation accuracy; ties go to the lowest fold index.
std::size_t select_best_fold(std::span<const fold_result> results);

// Checkpoint schema: json object {format, version, dim, vocab, embeddings,
// head_weights, head_bias}. Doubles survive a round trip exactly.
void save_checkpoint(const model_params& params, const std::filesystem::path& path);
model_params load_checkpoint(const std::filesystem::path& path);

}  // namespace slime
