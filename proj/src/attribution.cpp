#include "slime/attribution.hpp"

#include <cmath>

#include <json.hpp>

#include "slime/error.hpp"
#include "slime/util.hpp"

namespace slime {

double toy_attribution_model::value(const matrix& x) const {
    if (target_ == ig_target::probability) return forward(*params_, x);
    double p = forward(*params_, x);
    return std::log(p) - std::log1p(-p);  // recovers the pooled logit
}

matrix toy_attribution_model::gradient(const matrix& x) const {
    if (target_ == ig_target::probability) return grad_embeddings(*params_, x);
    // d logit / dx_{i,dim} = w_dim / n
    matrix g(x.rows, x.cols);
    double inv_n = 1.0 / static_cast<double>(x.rows);
    for (std::size_t i = 0; i < g.rows; ++i)
        for (std::size_t j = 0; j < g.cols; ++j)
            g(i, j) = params_->head_weights[j] * inv_n;
    return g;
}

matrix make_baseline(std::size_t n, std::size_t d) {
    if (n == 0 || d == 0) throw usage_error("make_baseline: zero-sized shape");
    return matrix(n, d, 0.0);
}

attribution_result integrated_gradients(const attribution_model& model, const matrix& x,
                                        const matrix& baseline, const ig_config& cfg) {
    if (!x.same_shape(baseline))
        throw usage_error("integrated_gradients: input and baseline shapes differ");
    if (cfg.steps < 1) throw usage_error("integrated_gradients: steps must be >= 1");
    if (!x.all_finite() || !baseline.all_finite())
        throw data_error("integrated_gradients: non-finite input");

    const std::size_t n = x.rows, d = x.cols;
    const int m = cfg.steps;
    matrix path(n, d);
    matrix accum(n, d, 0.0);

    auto eval_at = [&](double alpha, double weight) {
        for (std::size_t i = 0; i < x.data.size(); ++i)
            path.data[i] = baseline.data[i] + alpha * (x.data[i] - baseline.data[i]);
        matrix g = model.gradient(path);
        for (std::size_t i = 0; i < accum.data.size(); ++i)
            accum.data[i] += weight * g.data[i];
    };

    const double h = 1.0 / static_cast<double>(m);
    if (cfg.rule == ig_rule::trapezoid) {
        eval_at(0.0, 0.5 * h);
        for (int s = 1; s < m; ++s) eval_at(s * h, h);
        eval_at(1.0, 0.5 * h);
    } else {
        for (int s = 0; s < m; ++s) eval_at(s * h, h);
    }

    attribution_result res;
    res.per_dim = matrix(n, d);
    for (std::size_t i = 0; i < accum.data.size(); ++i)
        res.per_dim.data[i] = (x.data[i] - baseline.data[i]) * accum.data[i];
    res.per_token = reduce_token_attribution(res.per_dim);
    res.f_x = model.value(x);
    res.f_baseline = model.value(baseline);
    double total = 0.0;
    for (double a : res.per_token) total += a;
    res.completeness_residual = std::abs(total - (res.f_x - res.f_baseline));
    return res;
}

std::vector<double> reduce_token_attribution(const matrix& per_dim) {
    if (!per_dim.all_finite()) throw data_error("reduce_token_attribution: non-finite value");
    std::vector<double> out(per_dim.rows, 0.0);
    for (std::size_t i = 0; i < per_dim.rows; ++i)
        for (std::size_t j = 0; j < per_dim.cols; ++j)
            out[i] += per_dim(i, j);
    return out;
}

attributed_corpus attribute_corpus(const model_params& params, const corpus& c,
                                   const ig_config& cfg, int max_tokens) {
    attributed_corpus out;
    toy_attribution_model model(params, cfg.target);
    for (const auto& doc : c.documents) {
        if (doc.tokens.empty()) {
            out.warnings.push_back("document '" + doc.id + "' has no tokens, skipped");
            continue;
        }
        matrix x = embed_tokens(params, doc.tokens, max_tokens);
        matrix baseline = make_baseline(x.rows, x.cols);
        attribution_result res = integrated_gradients(model, x, baseline, cfg);
        attributed_document ad;
        ad.id = doc.id;
        ad.label = doc.label;
        ad.tokens.assign(doc.tokens.begin(), doc.tokens.begin() + static_cast<long>(x.rows));
        ad.attributions = std::move(res.per_token);
        ad.f_x = res.f_x;
        out.documents.push_back(std::move(ad));
    }
    return out;
}

attributed_corpus import_attributions(const std::filesystem::path& path) {
    attributed_corpus out;
    auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string where = path.string() + ":" + std::to_string(i + 1);
        if (trim(lines[i]).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(lines[i]);
        } catch (const nlohmann::json::exception& e) {
            throw data_error(where + ": " + e.what());
        }
        if (!j.is_object() || !j.contains("id") || !j["id"].is_string())
            throw data_error(where + ": expected object with string \"id\"");
        attributed_document d;
        d.id = j["id"].get<std::string>();
        if (!j.contains("label") || !j["label"].is_number_integer())
            throw data_error(where + ": missing label for document '" + d.id + "'");
        long label = j["label"].get<long>();
        if (label != 0 && label != 1)
            throw data_error(where + ": label outside {0,1}");
        d.label = static_cast<int>(label);
        if (!j.contains("tokens") || !j["tokens"].is_array())
            throw data_error(where + ": missing \"tokens\" array");
        if (!j.contains("attributions") || !j["attributions"].is_array())
            throw data_error(where + ": missing \"attributions\" array");
        for (const auto& t : j["tokens"]) {
            if (!t.is_string()) throw data_error(where + ": tokens must be strings");
            d.tokens.push_back(t.get<std::string>());
        }
        for (const auto& a : j["attributions"]) {
            if (!a.is_number()) throw data_error(where + ": attributions must be numbers");
            double v = a.get<double>();
            if (!std::isfinite(v)) throw data_error(where + ": non-finite attribution");
            d.attributions.push_back(v);
        }
        if (d.tokens.size() != d.attributions.size())
            throw data_error(where + ": " + std::to_string(d.tokens.size()) + " tokens but " +
                             std::to_string(d.attributions.size()) + " attributions");
        if (j.contains("f_x")) {
            if (!j["f_x"].is_number()) throw data_error(where + ": f_x must be a number");
            d.f_x = j["f_x"].get<double>();
        }
        out.documents.push_back(std::move(d));
    }
    if (out.documents.empty()) throw data_error(path.string() + ": no documents");
    return out;
}

void export_attributions(const attributed_corpus& ac, const std::filesystem::path& path) {
    std::string out;
    for (const auto& d : ac.documents) {
        nlohmann::json j;
        j["id"] = d.id;
        j["label"] = d.label;
        j["tokens"] = d.tokens;
        j["attributions"] = d.attributions;
        if (d.f_x) j["f_x"] = *d.f_x;
        out += j.dump();
        out += '\n';
    }
    write_file(path, out);
}

}  // namespace slime
