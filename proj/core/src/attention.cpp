#include "ctxattn/attention.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ctxattn/errors.hpp"
#include "ctxattn/ops.hpp"

namespace ctxattn::model {

using nn::Tensor2;

namespace {

void check_shapes(const Tensor2& annotations, const AttentionRef& p) {
    const std::size_t a = p.projection.rows();
    if (p.projection.cols() != annotations.cols() || p.bias.rows() != a || p.bias.cols() != 1 ||
        p.context.rows() != a || p.context.cols() != 1) {
        throw DimensionError(fmt::format("attention shapes disagree: annotations {}, W {}, b {}, context {}",
                                         annotations.shape_string(), p.projection.shape_string(),
                                         p.bias.shape_string(), p.context.shape_string()));
    }
}

}  // namespace

std::vector<double> normalize_scores(std::span<const double> scores, AttentionNorm norm) {
    if (norm == AttentionNorm::Softmax) return nn::softmax_vec(scores);
    if (scores.empty()) throw ArgumentError("attention over an empty sequence");
    double total = 0.0;
    for (double s : scores) total += s;
    if (total == 0.0 || !std::isfinite(total)) throw NumericError("linear attention: scores sum to zero");
    std::vector<double> alpha(scores.begin(), scores.end());
    for (auto& a : alpha) a /= total;
    return alpha;
}

AttentionForward attention_forward(const Tensor2& annotations, const AttentionRef& params, AttentionNorm norm) {
    if (annotations.rows() == 0) throw ArgumentError("attention over an empty sequence");
    check_shapes(annotations, params);
    const std::size_t steps = annotations.rows();
    const std::size_t a = params.projection.rows();

    AttentionForward out;
    auto& cache = out.cache;
    cache.annotations = annotations;
    cache.projected = Tensor2(steps, a);
    cache.scores.resize(steps);
    for (std::size_t t = 0; t < steps; ++t) {
        auto u = cache.projected.row(t);
        nn::affine(params.projection, annotations.row(t), params.bias.values(), u);
        for (auto& x : u) x = std::tanh(x);
        cache.scores[t] = nn::dot(u, params.context.values());
    }
    cache.alpha = normalize_scores(cache.scores, norm);

    out.result.alpha = cache.alpha;
    out.result.v.assign(annotations.cols(), 0.0);
    for (std::size_t t = 0; t < steps; ++t) {
        auto h = annotations.row(t);
        for (std::size_t d = 0; d < h.size(); ++d) out.result.v[d] += cache.alpha[t] * h[d];
    }
    return out;
}

Tensor2 attention_backward(const AttentionCache& cache, std::span<const double> grad_v, const AttentionRef& params,
                           const AttentionGrads& grads, AttentionNorm norm) {
    const std::size_t steps = cache.annotations.rows();
    const std::size_t a = params.projection.rows();
    if (grad_v.size() != cache.annotations.cols()) throw StateError("attention gradient size mismatch");

    Tensor2 grad_annotations(steps, cache.annotations.cols());
    std::vector<double> grad_alpha(steps);
    for (std::size_t t = 0; t < steps; ++t) {
        grad_alpha[t] = nn::dot(grad_v, cache.annotations.row(t));
        auto gh = grad_annotations.row(t);
        for (std::size_t d = 0; d < gh.size(); ++d) gh[d] = cache.alpha[t] * grad_v[d];
    }

    std::vector<double> grad_scores(steps);
    if (norm == AttentionNorm::Softmax) {
        grad_scores = nn::softmax_backward(cache.alpha, grad_alpha);
    } else {
        double total = 0.0;
        for (double s : cache.scores) total += s;
        const double inner = nn::dot(grad_alpha, cache.alpha);
        for (std::size_t t = 0; t < steps; ++t) grad_scores[t] = (grad_alpha[t] - inner) / total;
    }

    auto grad_context = grads.context.values();
    auto grad_bias = grads.bias.values();
    std::vector<double> grad_pre(a);
    for (std::size_t t = 0; t < steps; ++t) {
        auto u = cache.projected.row(t);
        for (std::size_t k = 0; k < a; ++k) {
            grad_context[k] += grad_scores[t] * u[k];
            grad_pre[k] = grad_scores[t] * params.context[k] * (1.0 - u[k] * u[k]);
            grad_bias[k] += grad_pre[k];
        }
        nn::outer_add(grad_pre, cache.annotations.row(t), grads.projection);
        nn::matvec_transposed_add(params.projection, grad_pre, grad_annotations.row(t));
    }
    return grad_annotations;
}

}  // namespace ctxattn::model
