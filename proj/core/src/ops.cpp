#include "ctxattn/ops.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ctxattn/errors.hpp"

namespace ctxattn::nn {

std::vector<double> softmax_vec(std::span<const double> z) {
    if (z.empty()) throw ArgumentError("softmax of an empty sequence");
    const double peak = *std::max_element(z.begin(), z.end());
    std::vector<double> out(z.size());
    double total = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        out[i] = std::exp(z[i] - peak);
        total += out[i];
    }
    for (auto& v : out) v /= total;
    return out;
}

std::vector<double> softmax_backward(std::span<const double> probs, std::span<const double> grad_probs) {
    const double inner = dot(probs, grad_probs);
    std::vector<double> out(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) out[i] = probs[i] * (grad_probs[i] - inner);
    return out;
}

DropoutResult dropout(const Tensor2& x, double p, Rng& rng, bool training) {
    if (!(p >= 0.0) || p >= 1.0) throw ArgumentError(fmt::format("dropout probability {} outside [0, 1)", p));
    DropoutResult result{x, Tensor2(x.rows(), x.cols(), 1.0)};
    if (!training || p == 0.0) return result;
    const double keep = 1.0 - p;
    const double scale = 1.0 / keep;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double m = rng.bernoulli(keep) ? scale : 0.0;
        result.mask[i] = m;
        result.output[i] = x[i] * m;
    }
    return result;
}

double cross_entropy(std::span<const double> probs, std::size_t label) {
    if (label >= probs.size()) {
        throw ArgumentError(fmt::format("label {} out of range for {} classes", label, probs.size()));
    }
    return -std::log(std::max(probs[label], kProbabilityFloor));
}

std::vector<double> cross_entropy_grad(std::span<const double> probs, std::size_t label) {
    if (label >= probs.size()) {
        throw ArgumentError(fmt::format("label {} out of range for {} classes", label, probs.size()));
    }
    std::vector<double> grad(probs.size(), 0.0);
    if (probs[label] > kProbabilityFloor) grad[label] = -1.0 / probs[label];
    return grad;
}

}  // namespace ctxattn::nn
