#include "ctxattn/model.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ctxattn/errors.hpp"
#include "ctxattn/ops.hpp"
#include "ctxattn/tokenizer.hpp"

namespace ctxattn::model {

using nn::Tensor2;
using names::Direction;

void ModelConfig::validate() const {
    if (embed_dim < 1 || hidden < 1 || layers < 1 || classes < 1 || max_len < 1) {
        throw ArgumentError("model dimensions (embed_dim, hidden, layers, classes, max_len) must be at least 1");
    }
    if (!(dropout >= 0.0) || dropout >= 1.0) {
        throw ArgumentError(fmt::format("dropout {} outside [0, 1)", dropout));
    }
}

std::string names::lstm(std::size_t layer, Direction dir, char part) {
    return fmt::format("lstm{}.{}.{}", layer, dir == Direction::Forward ? "fwd" : "bwd", part);
}

std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> parameter_layout(const ModelConfig& config,
                                                                                          std::size_t vocab_size) {
    std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> layout;
    const std::size_t h = config.hidden;
    layout.push_back({std::string(names::kEmbedding), {vocab_size, config.embed_dim}});
    for (std::size_t l = 0; l < config.layers; ++l) {
        const std::size_t in = l == 0 ? config.embed_dim : 2 * h;
        for (auto dir : {Direction::Forward, Direction::Backward}) {
            layout.push_back({names::lstm(l, dir, 'W'), {4 * h, in}});
            layout.push_back({names::lstm(l, dir, 'U'), {4 * h, h}});
            layout.push_back({names::lstm(l, dir, 'b'), {4 * h, 1}});
        }
    }
    const std::size_t a = config.attention_size();
    layout.push_back({std::string(names::kAttentionProjection), {a, 2 * h}});
    layout.push_back({std::string(names::kAttentionBias), {a, 1}});
    layout.push_back({std::string(names::kAttentionContext), {a, 1}});
    layout.push_back({std::string(names::kOutputWeights), {config.classes, 2 * h}});
    layout.push_back({std::string(names::kOutputBias), {config.classes, 1}});
    return layout;
}

namespace {

Tensor2 glorot(std::size_t rows, std::size_t cols, nn::Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Tensor2 t(rows, cols);
    for (auto& v : t.values()) v = rng.uniform(-limit, limit);
    return t;
}

constexpr double kContextInitRange = 0.1;
constexpr double kForgetBias = 1.0;

}  // namespace

ModelBundle init_model(const ModelConfig& config, text::Vocab vocab, std::vector<std::string> label_names,
                       Tensor2 embeddings, nn::Rng& rng) {
    config.validate();
    if (label_names.size() != config.classes) {
        throw ArgumentError(fmt::format("{} label names for {} classes", label_names.size(), config.classes));
    }
    if (embeddings.rows() != vocab.size() || embeddings.cols() != config.embed_dim) {
        throw DimensionError(fmt::format("embedding matrix {} does not match vocabulary {} x dim {}",
                                         embeddings.shape_string(), vocab.size(), config.embed_dim));
    }
    for (auto& v : embeddings.row(text::kPadId)) v = 0.0;

    ModelBundle bundle{config, std::move(vocab), std::move(label_names), {}};
    bundle.config.attention_dim = config.attention_size();
    for (const auto& [name, shape] : parameter_layout(config, bundle.vocab.size())) {
        const auto [rows, cols] = shape;
        if (name == names::kEmbedding) {
            bundle.params.add(name, std::move(embeddings));
        } else if (name.back() == 'b' && name.starts_with("lstm")) {
            Tensor2 b(rows, 1);
            const std::size_t h = config.hidden;
            for (std::size_t j = h; j < 2 * h; ++j) b[j] = kForgetBias;
            bundle.params.add(name, std::move(b));
        } else if (name == names::kAttentionContext) {
            Tensor2 u(rows, 1);
            for (auto& v : u.values()) v = rng.uniform(-kContextInitRange, kContextInitRange);
            bundle.params.add(name, std::move(u));
        } else if (cols == 1) {
            bundle.params.add(name, Tensor2(rows, 1));
        } else {
            bundle.params.add(name, glorot(rows, cols, rng));
        }
    }
    return bundle;
}

LstmCellRef lstm_cell(const nn::ParamStore& params, std::size_t layer, Direction dir) {
    return {params.value(names::lstm(layer, dir, 'W')), params.value(names::lstm(layer, dir, 'U')),
            params.value(names::lstm(layer, dir, 'b'))};
}

AttentionRef attention_params(const nn::ParamStore& params) {
    return {params.value(names::kAttentionProjection), params.value(names::kAttentionBias),
            params.value(names::kAttentionContext)};
}

namespace {

LstmCellGrads lstm_grads(nn::ParamStore& params, std::size_t layer, Direction dir) {
    return {params.grad(names::lstm(layer, dir, 'W')), params.grad(names::lstm(layer, dir, 'U')),
            params.grad(names::lstm(layer, dir, 'b'))};
}

ForwardResult forward_impl(const ModelBundle& bundle, std::span<const text::TokenId> ids, nn::Rng* rng) {
    if (ids.empty()) throw ArgumentError("cannot classify an empty token sequence");
    const auto& config = bundle.config;
    const auto& params = bundle.params;
    const bool training = rng != nullptr;
    const double p = training ? config.dropout : 0.0;
    nn::Rng unused(0);
    nn::Rng& draws = training ? *rng : unused;

    const Tensor2& table = params.value(names::kEmbedding);
    Tensor2 layer_input(ids.size(), config.embed_dim);
    for (std::size_t t = 0; t < ids.size(); ++t) {
        const auto id = ids[t];
        if (id < 0 || static_cast<std::size_t>(id) >= table.rows()) {
            throw ArgumentError(fmt::format("token id {} outside embedding table of {} rows", id, table.rows()));
        }
        auto src = table.row(static_cast<std::size_t>(id));
        std::copy(src.begin(), src.end(), layer_input.row(t).begin());
    }

    ForwardResult out;
    auto& cache = out.cache;
    cache.ids.assign(ids.begin(), ids.end());
    cache.training = training;
    for (std::size_t l = 0; l < config.layers; ++l) {
        auto dropped = nn::dropout(layer_input, p, draws, training);
        BiLstmResult layer = bilstm_forward(dropped.output, lstm_cell(params, l, Direction::Forward),
                                            lstm_cell(params, l, Direction::Backward));
        cache.layers.push_back(LayerCache{std::move(dropped.mask), std::move(layer.cache)});
        layer_input = std::move(layer.annotations);
    }

    AttentionForward attn = attention_forward(layer_input, attention_params(params), config.attention_norm);
    auto dropped_v = nn::dropout(Tensor2::column(attn.result.v), p, draws, training);
    cache.v_mask = std::move(dropped_v.mask);
    cache.v_dropped = dropped_v.output.data();

    std::vector<double> logits(config.classes);
    nn::affine(params.value(names::kOutputWeights), cache.v_dropped, params.value(names::kOutputBias).values(),
               logits);
    out.probs = nn::softmax_vec(logits);
    cache.probs = out.probs;
    cache.attention = std::move(attn.cache);
    out.attention = std::move(attn.result);
    return out;
}

}  // namespace

ForwardResult model_forward(const ModelBundle& bundle, std::span<const text::TokenId> ids) {
    return forward_impl(bundle, ids, nullptr);
}

ForwardResult model_forward(const ModelBundle& bundle, std::span<const text::TokenId> ids, nn::Rng& rng) {
    return forward_impl(bundle, ids, &rng);
}

ForwardResult model_forward(const ModelBundle& bundle, const text::TokenSequence& seq) {
    return forward_impl(bundle, seq.real_ids(), nullptr);
}

void model_backward(ModelBundle& bundle, const ForwardCache& cache, std::span<const double> grad_probs) {
    const auto& config = bundle.config;
    auto& params = bundle.params;
    if (cache.layers.size() != config.layers || cache.probs.size() != config.classes ||
        grad_probs.size() != config.classes || cache.v_dropped.size() != config.annotation_size() ||
        cache.attention.projected.cols() != config.attention_size() ||
        cache.attention.annotations.rows() != cache.ids.size()) {
        throw StateError("forward cache does not match the model configuration");
    }

    const std::vector<double> grad_logits = nn::softmax_backward(cache.probs, grad_probs);
    const Tensor2& w_out = params.value(names::kOutputWeights);
    nn::outer_add(grad_logits, cache.v_dropped, params.grad(names::kOutputWeights));
    auto grad_b_out = params.grad(names::kOutputBias).values();
    for (std::size_t k = 0; k < grad_logits.size(); ++k) grad_b_out[k] += grad_logits[k];

    std::vector<double> grad_v(config.annotation_size(), 0.0);
    nn::matvec_transposed_add(w_out, grad_logits, grad_v);
    for (std::size_t d = 0; d < grad_v.size(); ++d) grad_v[d] *= cache.v_mask[d];

    AttentionGrads attn_grads{params.grad(names::kAttentionProjection), params.grad(names::kAttentionBias),
                              params.grad(names::kAttentionContext)};
    Tensor2 grad = attention_backward(cache.attention, grad_v, attention_params(params), attn_grads,
                                      config.attention_norm);

    for (std::size_t l = config.layers; l-- > 0;) {
        const auto& layer = cache.layers[l];
        grad = bilstm_backward(layer.lstm, grad, lstm_cell(params, l, Direction::Forward),
                               lstm_cell(params, l, Direction::Backward), lstm_grads(params, l, Direction::Forward),
                               lstm_grads(params, l, Direction::Backward));
        if (!grad.same_shape(layer.input_mask)) throw StateError("dropout mask shape mismatch");
        for (std::size_t i = 0; i < grad.size(); ++i) grad[i] *= layer.input_mask[i];
    }

    if (!config.finetune_embeddings) return;
    Tensor2& grad_table = params.grad(names::kEmbedding);
    for (std::size_t t = 0; t < cache.ids.size(); ++t) {
        const auto id = static_cast<std::size_t>(cache.ids[t]);
        if (id == static_cast<std::size_t>(text::kPadId)) continue;
        auto dst = grad_table.row(id);
        auto src = grad.row(t);
        for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
    }
}

std::size_t argmax(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

Prediction predict(const ModelBundle& bundle, std::string_view text) {
    const auto tokens = text::tokenize(text);
    if (tokens.empty()) throw ArgumentError("text contains no tokens after normalization; nothing to classify");
    const auto seq = text::encode(tokens, bundle.vocab, bundle.config.max_len);
    ForwardResult fwd = model_forward(bundle, seq);

    Prediction pred;
    pred.label_index = argmax(fwd.probs);
    pred.label = pred.label_index < bundle.label_names.size() ? bundle.label_names[pred.label_index]
                                                              : std::to_string(pred.label_index);
    pred.probs = std::move(fwd.probs);
    pred.tokens = seq.tokens;
    pred.alpha = std::move(fwd.attention.alpha);
    return pred;
}

}  // namespace ctxattn::model
