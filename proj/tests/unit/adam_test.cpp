#include <gtest/gtest.h>

#include "ctxattn/adam.hpp"
#include "ctxattn/errors.hpp"
#include "test_support.hpp"

namespace ctxattn::nn {
namespace {

TEST(Adam, ScalarFirstStep) {
    ParamStore store;
    store.add("theta", Tensor2(1, 1, 1.0));
    store.grad("theta")[0] = 1.0;
    auto state = AdamState::for_store(store);
    adam_step(store, state, {});
    // m_hat = v_hat = 1, so theta = 1 - 0.001 / (1 + 1e-8) = 0.99900000001 (mpmath, 30 digits).
    EXPECT_NEAR(store.value("theta")[0], 0.999000000009999999900, 1e-15);
    EXPECT_EQ(state.step, 1u);
}

TEST(Adam, ZeroGradientIsFixedPoint) {
    Rng rng(8);
    ParamStore store;
    store.add("a", testing::random_tensor(3, 2, rng));
    store.add("b", testing::random_tensor(4, 1, rng));
    const auto a = store.value("a"), b = store.value("b");
    auto state = AdamState::for_store(store);
    for (int t = 0; t < 5; ++t) adam_step(store, state, {});
    EXPECT_EQ(store.value("a"), a);
    EXPECT_EQ(store.value("b"), b);
    EXPECT_EQ(state.step, 5u);

    store.grad("a").fill(0.3);
    adam_step(store, state, {});
    EXPECT_NE(store.value("a"), a);
}

TEST(Adam, Deterministic) {
    auto run = [] {
        Rng rng(99);
        ParamStore store;
        store.add("w", testing::random_tensor(5, 5, rng));
        auto state = AdamState::for_store(store);
        for (int t = 0; t < 3; ++t) {
            for (auto& g : store.grad("w").values()) g = rng.uniform(-1, 1);
            adam_step(store, state, {0.01, 0.9, 0.999, 1e-8});
        }
        return store.value("w");
    };
    EXPECT_EQ(run(), run());
}

TEST(Adam, SecondMomentNonNegative) {
    Rng rng(12);
    ParamStore store;
    store.add("w", testing::random_tensor(4, 4, rng));
    auto state = AdamState::for_store(store);
    for (int t = 0; t < 10; ++t) {
        for (auto& g : store.grad("w").values()) g = rng.uniform(-3, 3);
        adam_step(store, state, {});
    }
    for (double v : state.second_moment[0].values()) EXPECT_GE(v, 0.0);
}

TEST(Adam, ShapeMismatchIsStateError) {
    ParamStore store;
    store.add("w", Tensor2(2, 2));
    AdamState state;
    state.first_moment.emplace_back(3, 3);
    state.second_moment.emplace_back(3, 3);
    EXPECT_THROW(adam_step(store, state, {}), StateError);
    AdamState empty;
    EXPECT_THROW(adam_step(store, empty, {}), StateError);
}

}  // namespace
}  // namespace ctxattn::nn
