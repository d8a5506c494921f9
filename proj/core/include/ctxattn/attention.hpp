#pragma once

#include <span>
#include <vector>

#include "ctxattn/tensor.hpp"

namespace ctxattn::model {

/// How word scores become attention weights.
enum class AttentionNorm {
    Softmax,  ///< alpha = softmax(s)
    Linear,   ///< alpha_i = s_i / sum_j s_j; may be negative or undefined
};

/// W_h (A x 2H), b_h (A x 1) and the learned context vector u_c (A x 1).
struct AttentionRef {
    const nn::Tensor2& projection;
    const nn::Tensor2& bias;
    const nn::Tensor2& context;
};

struct AttentionGrads {
    nn::Tensor2& projection;
    nn::Tensor2& bias;
    nn::Tensor2& context;
};

struct AttentionResult {
    std::vector<double> alpha;  ///< one weight per word
    std::vector<double> v;      ///< weighted sum of annotations, length 2H
};

struct AttentionCache {
    nn::Tensor2 annotations;  ///< T x 2H
    nn::Tensor2 projected;    ///< T x A, u_i = tanh(W_h h_i + b_h)
    std::vector<double> scores;
    std::vector<double> alpha;
};

struct AttentionForward {
    AttentionResult result;
    AttentionCache cache;
};

/// Turns scores into weights. Linear mode throws NumericError when the
/// score sum is zero.
std::vector<double> normalize_scores(std::span<const double> scores, AttentionNorm norm);

/// u_i = tanh(W_h h_i + b_h); s_i = u_i . u_c; alpha = normalize(s); v = sum alpha_i h_i.
AttentionForward attention_forward(const nn::Tensor2& annotations, const AttentionRef& params,
                                   AttentionNorm norm = AttentionNorm::Softmax);

/// Accumulates parameter gradients and returns dL/dannotations.
nn::Tensor2 attention_backward(const AttentionCache& cache, std::span<const double> grad_v,
                               const AttentionRef& params, const AttentionGrads& grads,
                               AttentionNorm norm = AttentionNorm::Softmax);

}  // namespace ctxattn::model
