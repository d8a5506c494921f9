#include <gtest/gtest.h>

#include "ctxattn/errors.hpp"
#include "ctxattn/tensor.hpp"
#include "test_support.hpp"

namespace ctxattn::nn {
namespace {

TEST(Matmul, IdentityLeavesMatrixUnchanged) {
    const auto m = Tensor2::from_rows({{1, 2}, {3, 4}});
    EXPECT_EQ(matmul(Tensor2::identity(2), m), m);
}

TEST(Matmul, ZeroMatrixAnnihilates) {
    Rng rng(3);
    const auto b = testing::random_tensor(3, 5, rng);
    EXPECT_EQ(matmul(Tensor2(2, 3), b), Tensor2(2, 5));
}

TEST(Matmul, HandComputedProduct) {
    const auto c = matmul(Tensor2::from_rows({{1, 2}, {3, 4}}), Tensor2::from_rows({{5, 6}, {7, 8}}));
    EXPECT_EQ(c, Tensor2::from_rows({{19, 22}, {43, 50}}));
}

TEST(Matmul, ShapeMismatchNamesBothShapes) {
    try {
        matmul(Tensor2(2, 3), Tensor2(2, 3));
        FAIL() << "expected DimensionError";
    } catch (const DimensionError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("(2 x 3) * (2 x 3)"), std::string::npos) << msg;
    }
}

TEST(Matmul, AssociativeOnRandomChains) {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = 1 + rng.below(6), k = 1 + rng.below(6), m = 1 + rng.below(6), p = 1 + rng.below(6);
        const auto a = testing::random_tensor(n, k, rng);
        const auto b = testing::random_tensor(k, m, rng);
        const auto c = testing::random_tensor(m, p, rng);
        const auto left = matmul(matmul(a, b), c);
        const auto right = matmul(a, matmul(b, c));
        for (std::size_t i = 0; i < left.size(); ++i) {
            const double scale = std::max({std::abs(left[i]), std::abs(right[i]), 1.0});
            EXPECT_LE(std::abs(left[i] - right[i]) / scale, 1e-9);
        }
    }
}

TEST(Activations, TanhValues) {
    EXPECT_EQ(tanh_map(Tensor2(1, 1, 0.0))[0], 0.0);
    EXPECT_NEAR(tanh_map(Tensor2(1, 1, 1.0))[0], 0.761594155955764888, 1e-15);
    Rng rng(5);
    const auto x = testing::random_tensor(4, 4, rng, 5.0);
    Tensor2 neg = x;
    for (auto& v : neg.values()) v = -v;
    const auto a = tanh_map(x), b = tanh_map(neg);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_DOUBLE_EQ(a[i], -b[i]);
        EXPECT_LT(std::abs(a[i]), 1.0);
    }
}

TEST(Activations, SigmoidValues) {
    EXPECT_EQ(sigmoid_map(Tensor2(1, 1, 0.0))[0], 0.5);
    EXPECT_NEAR(sigmoid_map(Tensor2(1, 1, 1.0))[0], 0.731058578630004879, 1e-15);
    Rng rng(6);
    for (int i = 0; i < 100; ++i) {
        const double x = rng.uniform(-30, 30);
        EXPECT_NEAR(sigmoid(x) + sigmoid(-x), 1.0, 1e-15);
        EXPECT_GT(sigmoid(x), 0.0);
        EXPECT_LT(sigmoid(x), 1.0 + 1e-16);
    }
    EXPECT_TRUE(std::isfinite(sigmoid(-1000.0)));
}

TEST(Tensor2, RejectsMismatchedData) {
    EXPECT_THROW(Tensor2(2, 2, std::vector<double>{1, 2, 3}), DimensionError);
}

}  // namespace
}  // namespace ctxattn::nn
