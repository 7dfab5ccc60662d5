#include "slime/toymodel.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "slime/error.hpp"
#include "slime/rng.hpp"
#include "slime/util.hpp"

namespace slime {

namespace {

double logistic(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

double pooled_logit(const model_params& params, const matrix& x) {
    double z = params.head_bias;
    for (std::size_t j = 0; j < x.cols; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < x.rows; ++i) mean += x(i, j);
        mean /= static_cast<double>(x.rows);
        z += params.head_weights[j] * mean;
    }
    return z;
}

void check_input(const model_params& params, const matrix& x) {
    if (x.rows == 0) throw usage_error("forward: empty token matrix");
    if (x.cols != static_cast<std::size_t>(params.dim))
        throw usage_error("forward: embedding width mismatch");
    if (!x.all_finite()) throw data_error("forward: non-finite embedding value");
}

// Flat parameter order for the optimizer: embeddings, head weights, bias.
struct adam_state {
    std::vector<double> m, v;
    long step = 0;

    explicit adam_state(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

struct train_example {
    std::vector<int> rows;  // embedding rows, truncated
    int label = 0;
};

}  // namespace

matrix embed_tokens(const model_params& params, std::span<const std::string> tokens,
                    int max_tokens) {
    std::size_t n = std::min(tokens.size(), static_cast<std::size_t>(max_tokens));
    matrix x(n, static_cast<std::size_t>(params.dim));
    for (std::size_t i = 0; i < n; ++i) {
        auto src = params.row(params.token_row(tokens[i]));
        std::copy(src.begin(), src.end(), x.data.begin() + i * x.cols);
    }
    return x;
}

double forward(const model_params& params, const matrix& token_embeddings) {
    check_input(params, token_embeddings);
    return logistic(pooled_logit(params, token_embeddings));
}

matrix grad_embeddings(const model_params& params, const matrix& token_embeddings) {
    check_input(params, token_embeddings);
    double p = logistic(pooled_logit(params, token_embeddings));
    double scale = p * (1.0 - p) / static_cast<double>(token_embeddings.rows);
    matrix g(token_embeddings.rows, token_embeddings.cols);
    for (std::size_t i = 0; i < g.rows; ++i)
        for (std::size_t j = 0; j < g.cols; ++j)
            g(i, j) = scale * params.head_weights[j];
    return g;
}

double bce_with_logits(double logit, int label) {
    // -[y log p + (1-y) log(1-p)] computed from the logit without overflow.
    double z = label == 1 ? logit : -logit;
    if (z >= 0) return std::log1p(std::exp(-z));
    return -z + std::log1p(std::exp(z));
}

std::vector<fold_result> train(const corpus& c, const fold_plan& folds,
                               const train_config& cfg) {
    if (cfg.learning_rate < 0 || cfg.weight_decay < 0 || cfg.adam_eps <= 0 ||
        cfg.epochs < 1 || cfg.batch_size < 1 || cfg.embedding_dim < 1 || cfg.max_tokens < 1)
        throw usage_error("train: invalid configuration value");

    std::vector<fold_result> results;
    for (int fold = 0; fold < folds.k; ++fold) {
        std::vector<const document*> train_docs, val_docs;
        for (const auto& d : c.documents) {
            auto it = folds.assignments.find(d.id);
            if (it == folds.assignments.end())
                throw usage_error("fold plan does not cover document '" + d.id + "'");
            (it->second == fold ? val_docs : train_docs).push_back(&d);
        }
        std::erase_if(train_docs, [](const document* d) { return d->tokens.empty(); });
        if (train_docs.empty())
            throw usage_error("empty training fold " + std::to_string(fold));

        // Vocabulary from the training documents only; validation tokens the
        // model never saw land on the zero unknown row.
        std::set<std::string> vocab_tokens;
        for (const document* d : train_docs) {
            std::size_t n = std::min(d->tokens.size(), static_cast<std::size_t>(cfg.max_tokens));
            for (std::size_t i = 0; i < n; ++i) vocab_tokens.insert(d->tokens[i]);
        }

        model_params params;
        params.dim = cfg.embedding_dim;
        int next_row = 1;
        for (const auto& t : vocab_tokens) params.vocab[t] = next_row++;
        const auto dim = static_cast<std::size_t>(params.dim);
        params.embeddings.assign((vocab_tokens.size() + 1) * dim, 0.0);
        params.head_weights.assign(dim, 0.0);
        params.head_bias = 0.0;

        rng r(substream_seed(cfg.seed, "train-fold", static_cast<std::uint64_t>(fold)));
        double init_scale = 1.0 / std::sqrt(static_cast<double>(params.dim));
        for (std::size_t i = dim; i < params.embeddings.size(); ++i)
            params.embeddings[i] = (2.0 * r.next_unit() - 1.0) * init_scale;

        std::vector<train_example> examples;
        for (const document* d : train_docs) {
            train_example ex;
            ex.label = d->label;
            std::size_t n = std::min(d->tokens.size(), static_cast<std::size_t>(cfg.max_tokens));
            for (std::size_t i = 0; i < n; ++i) ex.rows.push_back(params.token_row(d->tokens[i]));
            examples.push_back(std::move(ex));
        }

        const std::size_t n_embed = params.embeddings.size();
        const std::size_t n_param = n_embed + dim + 1;
        adam_state adam(n_param);
        std::vector<double> grad(n_param, 0.0);
        std::vector<std::size_t> order(examples.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

        const double beta1 = 0.9, beta2 = 0.999;
        auto flat = [&](std::size_t i) -> double& {
            if (i < n_embed) return params.embeddings[i];
            if (i < n_embed + dim) return params.head_weights[i - n_embed];
            return params.head_bias;
        };

        for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
            r.shuffle(order);
            for (std::size_t start = 0; start < order.size();
                 start += static_cast<std::size_t>(cfg.batch_size)) {
                std::size_t stop =
                    std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
                std::fill(grad.begin(), grad.end(), 0.0);
                double inv_batch = 1.0 / static_cast<double>(stop - start);
                for (std::size_t b = start; b < stop; ++b) {
                    const auto& ex = examples[order[b]];
                    double inv_n = 1.0 / static_cast<double>(ex.rows.size());
                    double z = params.head_bias;
                    std::vector<double> pooled(dim, 0.0);
                    for (int row : ex.rows) {
                        auto e = params.row(row);
                        for (std::size_t j = 0; j < dim; ++j) pooled[j] += e[j];
                    }
                    for (std::size_t j = 0; j < dim; ++j) {
                        pooled[j] *= inv_n;
                        z += params.head_weights[j] * pooled[j];
                    }
                    double delta = (logistic(z) - ex.label) * inv_batch;  // dL/dz
                    for (int row : ex.rows) {
                        auto base = static_cast<std::size_t>(row) * dim;
                        for (std::size_t j = 0; j < dim; ++j)
                            grad[base + j] += delta * params.head_weights[j] * inv_n;
                    }
                    for (std::size_t j = 0; j < dim; ++j)
                        grad[n_embed + j] += delta * pooled[j];
                    grad[n_embed + dim] += delta;
                }

                adam.step++;
                double bc1 = 1.0 - std::pow(beta1, static_cast<double>(adam.step));
                double bc2 = 1.0 - std::pow(beta2, static_cast<double>(adam.step));
                for (std::size_t i = 0; i < n_param; ++i) {
                    adam.m[i] = beta1 * adam.m[i] + (1.0 - beta1) * grad[i];
                    adam.v[i] = beta2 * adam.v[i] + (1.0 - beta2) * grad[i] * grad[i];
                    double mhat = adam.m[i] / bc1;
                    double vhat = adam.v[i] / bc2;
                    double& p = flat(i);
                    // Decoupled weight decay: applied directly, scaled by lr only.
                    p -= cfg.learning_rate * (mhat / (std::sqrt(vhat) + cfg.adam_eps) +
                                              cfg.weight_decay * p);
                }
                // Keep the unknown row pinned at zero.
                std::fill(params.embeddings.begin(), params.embeddings.begin() + dim, 0.0);
            }
        }

        std::size_t correct = 0, evaluated = 0;
        for (const document* d : val_docs) {
            if (d->tokens.empty()) continue;
            evaluated++;
            matrix x = embed_tokens(params, d->tokens, cfg.max_tokens);
            int predicted = pooled_logit(params, x) >= 0 ? 1 : 0;
            if (predicted == d->label) correct++;
        }
        fold_result res;
        res.fold = fold;
        res.params = std::move(params);
        res.val_accuracy =
            evaluated == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(evaluated);
        results.push_back(std::move(res));
    }
    return results;
}

std::size_t select_best_fold(std::span<const fold_result> results) {
    if (results.empty()) throw usage_error("select_best_fold: no fold results");
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
        if (results[i].val_accuracy > results[best].val_accuracy) best = i;
    return best;
}

void save_checkpoint(const model_params& params, const std::filesystem::path& path) {
    nlohmann::json j;
    j["format"] = "slime-model";
    j["version"] = 1;
    j["dim"] = params.dim;
    j["vocab"] = params.vocab;
    j["embeddings"] = params.embeddings;
    j["head_weights"] = params.head_weights;
    j["head_bias"] = params.head_bias;
    write_file(path, j.dump());
}

model_params load_checkpoint(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw data_error(path.string() + ": " + e.what());
    }
    if (!j.is_object() || j.value("format", "") != "slime-model")
        throw data_error(path.string() + ": not a slime model checkpoint");
    if (j.value("version", 0) != 1)
        throw data_error(path.string() + ": unsupported checkpoint version");
    model_params params;
    try {
        params.dim = j.at("dim").get<int>();
        params.vocab = j.at("vocab").get<std::map<std::string, int>>();
        params.embeddings = j.at("embeddings").get<std::vector<double>>();
        params.head_weights = j.at("head_weights").get<std::vector<double>>();
        params.head_bias = j.at("head_bias").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw data_error(path.string() + ": " + e.what());
    }
    if (params.dim < 1 ||
        params.embeddings.size() !=
            (params.vocab.size() + 1) * static_cast<std::size_t>(params.dim) ||
        params.head_weights.size() != static_cast<std::size_t>(params.dim))
        throw data_error(path.string() + ": inconsistent checkpoint shapes");
    return params;
}

}  // namespace slime
