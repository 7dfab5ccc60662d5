#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slime/corpus.hpp"
#include "slime/matrix.hpp"
#include "slime/toymodel.hpp"

namespace slime {

enum class ig_rule { left, trapezoid };
enum class ig_target { probability, logit };

struct ig_config {
    int steps = 512;  // quadrature intervals over alpha in [0,1]
    ig_rule rule = ig_rule::trapezoid;
    ig_target target = ig_target::probability;
};

// Differentiable scalar function of an n x d embedding matrix. Integrated
// gradients only needs values and gradients, so test models (e.g. a plain
// linear map with a known closed form) plug in alongside the toy classifier.
struct attribution_model {
    virtual ~attribution_model() = default;
    virtual double value(const matrix& x) const = 0;
    virtual matrix gradient(const matrix& x) const = 0;
};

class toy_attribution_model final : public attribution_model {
public:
    toy_attribution_model(const model_params& params, ig_target target)
        : params_(&params), target_(target) {}

    double value(const matrix& x) const override;
    matrix gradient(const matrix& x) const override;

private:
    const model_params* params_;
    ig_target target_;
};

// All-zero matrix: the embedding of token absence.
matrix make_baseline(std::size_t n, std::size_t d);

struct attribution_result {
    matrix per_dim;                 // IG_{i,dim}
    std::vector<double> per_token;  // row sums of per_dim
    double f_x = 0.0;
    double f_baseline = 0.0;
    double completeness_residual = 0.0;  // |sum per_token - (f_x - f_baseline)|
};

// per_dim_{i,dim} = (x - baseline)_{i,dim} * quadrature over alpha of
// dF(baseline + alpha (x - baseline))/dx_{i,dim}.
attribution_result integrated_gradients(const attribution_model& model, const matrix& x,
                                        const matrix& baseline, const ig_config& cfg);

// Row sums; keeps sign so the per-token vector still satisfies completeness.
std::vector<double> reduce_token_attribution(const matrix& per_dim);

struct attributed_document {
    std::string id;
    int label = 0;
    std::vector<std::string> tokens;
    std::vector<double> attributions;
    std::optional<double> f_x;

    bool operator==(const attributed_document&) const = default;
};

struct attributed_corpus {
    std::vector<attributed_document> documents;
    std::vector<std::string> warnings;  // e.g. skipped empty documents
};

// Zero-baseline IG over every document, in corpus order. Documents longer
// than max_tokens are attributed over their first max_tokens tokens and the
// emitted token list is truncated to match.
attributed_corpus attribute_corpus(const model_params& params, const corpus& c,
                                   const ig_config& cfg, int max_tokens = 512);

// Interchange jsonl, one document per line:
//   {"id": str, "label": 0|1, "tokens": [...], "attributions": [...], "f_x": float?}
// Brings in attributions from any external model; arrays must be equal length.
attributed_corpus import_attributions(const std::filesystem::path& path);
void export_attributions(const attributed_corpus& ac, const std::filesystem::path& path);

}  // namespace slime
