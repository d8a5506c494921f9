#include "ctxattn/report.hpp"

#include <fmt/format.h>

#include "json.hpp"

namespace ctxattn::io {

using nlohmann::ordered_json;

namespace {

ordered_json per_class_json(const train::MetricsReport& m, std::span<const std::string> labels) {
    ordered_json out = ordered_json::array();
    for (std::size_t c = 0; c < m.per_class.size(); ++c) {
        const auto& pc = m.per_class[c];
        out.push_back(ordered_json{{"label", c < labels.size() ? labels[c] : std::to_string(c)},
                                   {"precision", pc.precision},
                                   {"recall", pc.recall},
                                   {"f1", pc.f1},
                                   {"support", pc.support}});
    }
    return out;
}

ordered_json metrics_object(const train::MetricsReport& m, std::span<const std::string> labels) {
    return ordered_json{{"weighted_f1", m.weighted_f1}, {"macro_f1", m.macro_f1},
                        {"accuracy", m.accuracy},       {"total", m.total},
                        {"confusion", m.confusion},     {"per_class", per_class_json(m, labels)}};
}

std::string confusion_text(const train::ConfusionMatrix& confusion, std::span<const std::string> labels) {
    std::size_t width = 6;
    for (const auto& l : labels) width = std::max(width, l.size() + 1);
    std::string out = fmt::format("  {:<{}}", "true\\pred", width);
    for (const auto& l : labels) out += fmt::format("{:>{}}", l, width);
    out += '\n';
    for (std::size_t r = 0; r < confusion.size(); ++r) {
        out += fmt::format("  {:<{}}", r < labels.size() ? labels[r] : std::to_string(r), width);
        for (auto v : confusion[r]) out += fmt::format("{:>{}}", v, width);
        out += '\n';
    }
    return out;
}

}  // namespace

std::string cv_report_json(const train::CvReport& report) {
    ordered_json folds = ordered_json::array();
    for (const auto& f : report.folds) {
        ordered_json losses = ordered_json::array();
        for (const auto& e : f.history) losses.push_back(e.mean_loss);
        ordered_json entry{{"fold", f.fold},
                           {"train_size", f.train_size},
                           {"test_size", f.test_size},
                           {"vocab_size", f.vocab_size},
                           {"embeddings_found", f.embeddings_found},
                           {"embeddings_missing", f.embeddings_missing},
                           {"epoch_losses", std::move(losses)}};
        entry.update(metrics_object(f.metrics, report.label_names));
        folds.push_back(std::move(entry));
    }
    const ordered_json out{{"per_fold", std::move(folds)},
                           {"mean_weighted_f1", report.mean_weighted_f1},
                           {"pooled_weighted_f1", report.pooled_weighted_f1},
                           {"confusion", report.pooled_confusion},
                           {"labels", report.label_names}};
    return out.dump(2) + "\n";
}

std::string cv_report_text(const train::CvReport& report) {
    std::string out = fmt::format("{}-fold cross-validation\n", report.folds.size());
    for (const auto& f : report.folds) {
        out += fmt::format("  fold {:>2}: weighted F1 {:.4f}  accuracy {:.4f}  (train {}, test {}, final loss {:.4f})\n",
                           f.fold, f.metrics.weighted_f1, f.metrics.accuracy, f.train_size, f.test_size,
                           f.history.empty() ? 0.0 : f.history.back().mean_loss);
    }
    out += fmt::format("mean weighted F1:   {:.4f}\n", report.mean_weighted_f1);
    out += fmt::format("pooled weighted F1: {:.4f}\n", report.pooled_weighted_f1);
    out += "pooled confusion:\n" + confusion_text(report.pooled_confusion, report.label_names);
    return out;
}

std::string metrics_json(const train::MetricsReport& metrics, std::span<const std::string> label_names) {
    ordered_json out = metrics_object(metrics, label_names);
    out["labels"] = std::vector<std::string>(label_names.begin(), label_names.end());
    return out.dump(2) + "\n";
}

std::string metrics_text(const train::MetricsReport& metrics, std::span<const std::string> label_names) {
    std::string out = fmt::format("examples: {}\naccuracy: {:.4f}\nweighted F1: {:.4f}\nmacro F1: {:.4f}\n",
                                  metrics.total, metrics.accuracy, metrics.weighted_f1, metrics.macro_f1);
    out += "per class:\n";
    for (std::size_t c = 0; c < metrics.per_class.size(); ++c) {
        const auto& pc = metrics.per_class[c];
        out += fmt::format("  {:<12} P {:.4f}  R {:.4f}  F1 {:.4f}  support {}\n",
                           c < label_names.size() ? label_names[c] : std::to_string(c), pc.precision, pc.recall,
                           pc.f1, pc.support);
    }
    out += "confusion:\n" + confusion_text(metrics.confusion, label_names);
    return out;
}

std::string training_log_json(const train::FittedModel& fitted, const train::TrainConfig& config) {
    ordered_json epochs = ordered_json::array();
    for (const auto& e : fitted.history) epochs.push_back(ordered_json{{"epoch", e.epoch}, {"mean_loss", e.mean_loss}});
    const auto& mc = fitted.bundle.config;
    const ordered_json out{
        {"train", ordered_json{{"lr", config.lr},
                               {"epochs", config.epochs},
                               {"dropout", config.dropout},
                               {"batch_size", config.batch_size},
                               {"seed", config.seed},
                               {"shuffle", config.shuffle}}},
        {"model", ordered_json{{"embed_dim", mc.embed_dim},
                               {"hidden", mc.hidden},
                               {"layers", mc.layers},
                               {"classes", mc.classes},
                               {"attention_dim", mc.attention_size()},
                               {"max_len", mc.max_len}}},
        {"vocab_size", fitted.bundle.vocab.size()},
        {"embeddings_found", fitted.embeddings_found},
        {"embeddings_missing", fitted.embeddings_missing},
        {"epochs", std::move(epochs)}};
    return out.dump(2) + "\n";
}

}  // namespace ctxattn::io
