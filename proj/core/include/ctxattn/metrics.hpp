#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ctxattn::train {

/// K x K counts; rows are true classes, columns predicted classes.
using ConfusionMatrix = std::vector<std::vector<std::size_t>>;

ConfusionMatrix confusion_matrix(std::span<const std::size_t> truth, std::span<const std::size_t> predicted,
                                 std::size_t classes);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

struct MetricsReport {
    ConfusionMatrix confusion;
    std::vector<ClassMetrics> per_class;
    double weighted_f1 = 0.0;
    double macro_f1 = 0.0;
    double accuracy = 0.0;
    std::size_t total = 0;
};

/// Per-class precision/recall/F1 with 0 whenever a denominator is 0.
/// Throws ArgumentError for a non-square or all-zero matrix.
MetricsReport metrics_report(const ConfusionMatrix& confusion);

/// sum_c support_c * F1_c / total.
double weighted_f1(const ConfusionMatrix& confusion);

/// Element-wise sum of equally sized matrices.
ConfusionMatrix add_confusion(const ConfusionMatrix& a, const ConfusionMatrix& b);

}  // namespace ctxattn::train
