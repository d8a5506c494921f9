#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ctxattn/rng.hpp"
#include "ctxattn/tensor.hpp"

namespace ctxattn::nn {

/// Max-subtracted softmax. Throws ArgumentError on empty input.
std::vector<double> softmax_vec(std::span<const double> z);

/// Backward of softmax: given p = softmax(z) and dL/dp, returns dL/dz.
std::vector<double> softmax_backward(std::span<const double> probs, std::span<const double> grad_probs);

struct DropoutResult {
    Tensor2 output;
    Tensor2 mask;  ///< 0 or 1/(1-p) per entry; all ones when inactive
};

/// Inverted dropout. Draws one rng.bernoulli(1 - p) per entry in row-major
/// order when active; draws nothing when training is false or p == 0.
DropoutResult dropout(const Tensor2& x, double p, Rng& rng, bool training);

inline constexpr double kProbabilityFloor = 1e-12;

/// -ln(max(probs[label], 1e-12)).
double cross_entropy(std::span<const double> probs, std::size_t label);

/// dL/dprobs of cross_entropy; zero everywhere when the floor is active.
std::vector<double> cross_entropy_grad(std::span<const double> probs, std::size_t label);

}  // namespace ctxattn::nn
