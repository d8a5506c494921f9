#pragma once

#include <cstdint>
#include <vector>

#include "ctxattn/params.hpp"

namespace ctxattn::nn {

struct AdamConfig {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// First and second moments, one pair per ParamStore entry in store order.
struct AdamState {
    std::vector<Tensor2> first_moment;
    std::vector<Tensor2> second_moment;
    std::uint64_t step = 0;

    /// Zero moments shaped like `store`.
    static AdamState for_store(const ParamStore& store);
};

/// One bias-corrected Adam update using the gradients currently in `store`.
/// Throws StateError when `state` does not match the store's shapes.
void adam_step(ParamStore& store, AdamState& state, const AdamConfig& config);

}  // namespace ctxattn::nn
