#include "ctxattn/adam.hpp"

#include <cmath>

#include "ctxattn/errors.hpp"

namespace ctxattn::nn {

AdamState AdamState::for_store(const ParamStore& store) {
    AdamState state;
    for (const auto& p : store) {
        state.first_moment.emplace_back(p.value.rows(), p.value.cols());
        state.second_moment.emplace_back(p.value.rows(), p.value.cols());
    }
    return state;
}

void adam_step(ParamStore& store, AdamState& state, const AdamConfig& config) {
    if (!(config.lr > 0.0)) throw ArgumentError("adam learning rate must be positive");
    if (state.first_moment.size() != store.size() || state.second_moment.size() != store.size()) {
        throw StateError("adam state does not match parameter count");
    }
    {
        std::size_t k = 0;
        for (const auto& p : store) {
            if (!state.first_moment[k].same_shape(p.value) || !state.second_moment[k].same_shape(p.value)) {
                throw StateError("adam moment shape mismatch for parameter " + p.name);
            }
            ++k;
        }
    }

    ++state.step;
    const double t = static_cast<double>(state.step);
    const double correction1 = 1.0 - std::pow(config.beta1, t);
    const double correction2 = 1.0 - std::pow(config.beta2, t);

    std::size_t k = 0;
    for (auto& p : store) {
        auto& m = state.first_moment[k];
        auto& v = state.second_moment[k];
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            const double g = p.grad[i];
            m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g;
            v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g * g;
            const double m_hat = m[i] / correction1;
            const double v_hat = v[i] / correction2;
            p.value[i] -= config.lr * m_hat / (std::sqrt(v_hat) + config.eps);
        }
        ++k;
    }
}

}  // namespace ctxattn::nn
