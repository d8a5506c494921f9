#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "ctxattn/params.hpp"

namespace ctxattn::nn {

struct GradCheckResult {
    double max_rel_error = 0.0;
    std::string worst_param;
    std::size_t worst_index = 0;
    double analytic = 0.0;
    double numeric = 0.0;
    std::size_t checked = 0;
};

using LossFn = std::function<double(const ParamStore&)>;

/// Compares the gradients already stored in `store` against central
/// differences (f(x+h) - f(x-h)) / 2h of `loss`, for every scalar of every
/// parameter. Relative error per entry is |a-n| / max(|a|, |n|, 1e-8).
/// Values are restored after each probe. Throws NumericError if `loss`
/// returns a non-finite value.
GradCheckResult grad_check(const LossFn& loss, ParamStore& store, double h = 1e-5);

}  // namespace ctxattn::nn
