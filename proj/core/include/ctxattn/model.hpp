#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctxattn/attention.hpp"
#include "ctxattn/lstm.hpp"
#include "ctxattn/params.hpp"
#include "ctxattn/rng.hpp"
#include "ctxattn/vocab.hpp"

namespace ctxattn::model {

struct ModelConfig {
    std::size_t embed_dim = 300;
    std::size_t hidden = 64;  ///< per direction
    std::size_t layers = 2;
    std::size_t classes = 2;
    std::size_t attention_dim = 0;  ///< 0 selects 2 * hidden
    double dropout = 0.2;
    std::size_t max_len = 50;
    bool finetune_embeddings = true;
    AttentionNorm attention_norm = AttentionNorm::Softmax;

    std::size_t attention_size() const noexcept { return attention_dim ? attention_dim : 2 * hidden; }
    std::size_t annotation_size() const noexcept { return 2 * hidden; }
    /// Throws ArgumentError on a zero dimension or dropout outside [0, 1).
    void validate() const;

    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Everything needed to run or persist a trained classifier.
struct ModelBundle {
    ModelConfig config;
    text::Vocab vocab;
    std::vector<std::string> label_names;
    nn::ParamStore params;
};

namespace names {

inline constexpr std::string_view kEmbedding = "embedding";
inline constexpr std::string_view kAttentionProjection = "attention.W";
inline constexpr std::string_view kAttentionBias = "attention.b";
inline constexpr std::string_view kAttentionContext = "attention.context";
inline constexpr std::string_view kOutputWeights = "output.W";
inline constexpr std::string_view kOutputBias = "output.b";

enum class Direction { Forward, Backward };

/// "lstm<layer>.<fwd|bwd>.<W|U|b>"
std::string lstm(std::size_t layer, Direction dir, char part);

}  // namespace names

/// Creates every parameter. `embeddings` must be |vocab| x embed_dim with a
/// zero PAD row. Weights are uniform in +-sqrt(6 / (rows + cols)), LSTM
/// biases are zero except the forget block (1.0), the attention context
/// vector is uniform in [-0.1, 0.1], remaining biases are zero.
ModelBundle init_model(const ModelConfig& config, text::Vocab vocab, std::vector<std::string> label_names,
                       nn::Tensor2 embeddings, nn::Rng& rng);

/// Expected shape of every parameter, in store order.
std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> parameter_layout(const ModelConfig& config,
                                                                                          std::size_t vocab_size);

LstmCellRef lstm_cell(const nn::ParamStore& params, std::size_t layer, names::Direction dir);
AttentionRef attention_params(const nn::ParamStore& params);

struct LayerCache {
    nn::Tensor2 input_mask;  ///< dropout mask applied to this layer's input
    BiLstmCache lstm;
};

struct ForwardCache {
    std::vector<text::TokenId> ids;
    std::vector<LayerCache> layers;
    AttentionCache attention;
    nn::Tensor2 v_mask;
    std::vector<double> v_dropped;
    std::vector<double> probs;
    bool training = false;
};

struct ForwardResult {
    std::vector<double> probs;
    AttentionResult attention;
    ForwardCache cache;
};

/// Inference: no dropout, no randomness.
ForwardResult model_forward(const ModelBundle& bundle, std::span<const text::TokenId> ids);
/// Training: dropout masks drawn from `rng` (embeddings, each layer above
/// the first, then the message vector, each in row-major order).
ForwardResult model_forward(const ModelBundle& bundle, std::span<const text::TokenId> ids, nn::Rng& rng);
ForwardResult model_forward(const ModelBundle& bundle, const text::TokenSequence& seq);

/// Accumulates dL/dparams into bundle.params given dL/dprobs. Embedding
/// gradients are dropped when finetune_embeddings is false; the PAD row
/// never receives gradient. Throws StateError if the cache does not fit the
/// bundle.
void model_backward(ModelBundle& bundle, const ForwardCache& cache, std::span<const double> grad_probs);

struct Prediction {
    std::size_t label_index = 0;
    std::string label;
    std::vector<double> probs;
    std::vector<std::string> tokens;  ///< tokens actually scored (after truncation)
    std::vector<double> alpha;        ///< aligned with tokens
};

/// Tokenize, encode and classify. Throws ArgumentError if the text has no tokens.
Prediction predict(const ModelBundle& bundle, std::string_view text);

std::size_t argmax(std::span<const double> values);

}  // namespace ctxattn::model
