#include "ctxattn/metrics.hpp"

#include <fmt/format.h>

#include "ctxattn/errors.hpp"

namespace ctxattn::train {

ConfusionMatrix confusion_matrix(std::span<const std::size_t> truth, std::span<const std::size_t> predicted,
                                 std::size_t classes) {
    if (truth.size() != predicted.size()) {
        throw ArgumentError(fmt::format("{} true labels vs {} predictions", truth.size(), predicted.size()));
    }
    ConfusionMatrix m(classes, std::vector<std::size_t>(classes, 0));
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] >= classes || predicted[i] >= classes) {
            throw ArgumentError(fmt::format("label out of range for {} classes", classes));
        }
        ++m[truth[i]][predicted[i]];
    }
    return m;
}

MetricsReport metrics_report(const ConfusionMatrix& confusion) {
    const std::size_t k = confusion.size();
    MetricsReport report;
    report.confusion = confusion;
    report.per_class.resize(k);

    std::vector<std::size_t> predicted(k, 0);
    std::size_t correct = 0;
    for (std::size_t r = 0; r < k; ++r) {
        if (confusion[r].size() != k) throw ArgumentError("confusion matrix is not square");
        for (std::size_t c = 0; c < k; ++c) {
            report.per_class[r].support += confusion[r][c];
            predicted[c] += confusion[r][c];
            report.total += confusion[r][c];
        }
        correct += confusion[r][r];
    }
    if (report.total == 0) throw ArgumentError("confusion matrix has no counts");

    double weighted = 0.0, macro = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        auto& m = report.per_class[c];
        const double tp = static_cast<double>(confusion[c][c]);
        m.precision = predicted[c] ? tp / static_cast<double>(predicted[c]) : 0.0;
        m.recall = m.support ? tp / static_cast<double>(m.support) : 0.0;
        m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
        weighted += static_cast<double>(m.support) * m.f1;
        macro += m.f1;
    }
    report.weighted_f1 = weighted / static_cast<double>(report.total);
    report.macro_f1 = k ? macro / static_cast<double>(k) : 0.0;
    report.accuracy = static_cast<double>(correct) / static_cast<double>(report.total);
    return report;
}

double weighted_f1(const ConfusionMatrix& confusion) { return metrics_report(confusion).weighted_f1; }

ConfusionMatrix add_confusion(const ConfusionMatrix& a, const ConfusionMatrix& b) {
    if (a.empty()) return b;
    if (a.size() != b.size()) throw ArgumentError("confusion matrices differ in size");
    ConfusionMatrix out = a;
    for (std::size_t r = 0; r < a.size(); ++r) {
        if (a[r].size() != b[r].size()) throw ArgumentError("confusion matrices differ in size");
        for (std::size_t c = 0; c < a[r].size(); ++c) out[r][c] += b[r][c];
    }
    return out;
}

}  // namespace ctxattn::train
