#include "ctxattn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ctxattn/errors.hpp"

namespace ctxattn::nn {

namespace {

double checked_loss(const LossFn& loss, const ParamStore& store, const std::string& name, std::size_t i) {
    const double value = loss(store);
    if (!std::isfinite(value)) {
        throw NumericError(fmt::format("non-finite loss while probing {}[{}]", name, i));
    }
    return value;
}

}  // namespace

GradCheckResult grad_check(const LossFn& loss, ParamStore& store, double h) {
    if (!(h > 0.0)) throw ArgumentError("grad_check step must be positive");
    GradCheckResult result;
    for (auto& p : store) {
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            const double original = p.value[i];
            p.value[i] = original + h;
            const double up = checked_loss(loss, store, p.name, i);
            p.value[i] = original - h;
            const double down = checked_loss(loss, store, p.name, i);
            p.value[i] = original;

            const double numeric = (up - down) / (2.0 * h);
            const double analytic = p.grad[i];
            const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
            const double rel = std::abs(analytic - numeric) / scale;
            ++result.checked;
            if (rel > result.max_rel_error || result.checked == 1) {
                result.max_rel_error = std::max(rel, result.max_rel_error);
                result.worst_param = p.name;
                result.worst_index = i;
                result.analytic = analytic;
                result.numeric = numeric;
            }
        }
    }
    return result;
}

}  // namespace ctxattn::nn
