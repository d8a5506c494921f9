#include "ctxattn/cross_validation.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "ctxattn/errors.hpp"
#include "ctxattn/tokenizer.hpp"

namespace ctxattn::train {

std::vector<std::size_t> label_indices(std::span<const text::LabeledExample> examples,
                                       std::span<const std::string> label_names) {
    std::vector<std::size_t> out;
    out.reserve(examples.size());
    for (const auto& ex : examples) {
        auto it = std::find(label_names.begin(), label_names.end(), ex.label);
        if (it == label_names.end()) throw ArgumentError("unknown label '" + ex.label + "'");
        out.push_back(static_cast<std::size_t>(it - label_names.begin()));
    }
    return out;
}

std::unordered_set<std::string> corpus_tokens(std::span<const text::LabeledExample> examples) {
    std::unordered_set<std::string> out;
    for (const auto& ex : examples) {
        for (auto& t : text::tokenize(ex.text)) out.insert(std::move(t));
    }
    return out;
}

FittedModel fit(std::span<const text::LabeledExample> examples, std::span<const std::string> label_names,
                const PipelineConfig& config, const text::EmbeddingTable* pretrained, std::uint64_t seed) {
    if (examples.empty()) throw ArgumentError("training set is empty");
    const auto labels = label_indices(examples, label_names);

    std::vector<std::vector<std::string>> tokenized;
    tokenized.reserve(examples.size());
    for (const auto& ex : examples) tokenized.push_back(text::tokenize(ex.text));
    text::Vocab vocab = text::build_vocab(std::span<const std::vector<std::string>>(tokenized), config.min_freq);

    nn::Rng rng(seed);
    model::ModelConfig model_config = config.model;
    model_config.classes = label_names.size();
    model_config.dropout = config.train.dropout;

    text::EmbeddingMatrix embeddings;
    if (pretrained) {
        model_config.embed_dim = pretrained->dim;
        embeddings = text::build_embedding_matrix(*pretrained, vocab, rng);
    } else {
        embeddings = text::random_embedding_matrix(vocab, model_config.embed_dim, rng);
    }

    std::vector<EncodedExample> encoded;
    encoded.reserve(examples.size());
    for (std::size_t i = 0; i < examples.size(); ++i) {
        std::vector<text::TokenId> ids;
        if (tokenized[i].empty()) {
            ids = {text::kUnkId};
        } else {
            const auto seq = text::encode(tokenized[i], vocab, model_config.max_len);
            ids.assign(seq.ids.begin(), seq.ids.begin() + static_cast<std::ptrdiff_t>(seq.length));
        }
        encoded.push_back({std::move(ids), labels[i]});
    }

    FittedModel fitted{model::init_model(model_config, std::move(vocab),
                                         std::vector<std::string>(label_names.begin(), label_names.end()),
                                         std::move(embeddings.weights), rng),
                       {}, embeddings.found, embeddings.missing};
    fitted.history = train(fitted.bundle, encoded, config.train, rng);
    return fitted;
}

MetricsReport evaluate(const model::ModelBundle& bundle, std::span<const text::LabeledExample> examples) {
    if (examples.empty()) throw ArgumentError("evaluation set is empty");
    const auto truth = label_indices(examples, bundle.label_names);
    std::vector<std::size_t> predicted;
    predicted.reserve(examples.size());
    for (const auto& ex : examples) {
        const auto ids = encode_text(ex.text, bundle.vocab, bundle.config.max_len);
        predicted.push_back(model::argmax(model::model_forward(bundle, ids).probs));
    }
    return metrics_report(confusion_matrix(truth, predicted, bundle.label_names.size()));
}

namespace {

FoldReport run_fold(std::span<const text::LabeledExample> examples, std::span<const std::string> label_names,
                    const FoldSplit& split, std::size_t fold, const PipelineConfig& config,
                    const text::EmbeddingTable* pretrained) {
    std::vector<text::LabeledExample> train_set, test_set;
    for (std::size_t i : split.training_indices(fold)) train_set.push_back(examples[i]);
    for (std::size_t i : split.folds[fold]) test_set.push_back(examples[i]);

    FittedModel fitted = fit(train_set, label_names, config, pretrained, config.train.seed + fold);
    FoldReport report;
    report.fold = fold;
    report.train_size = train_set.size();
    report.test_size = test_set.size();
    report.vocab_size = fitted.bundle.vocab.size();
    report.embeddings_found = fitted.embeddings_found;
    report.embeddings_missing = fitted.embeddings_missing;
    report.history = std::move(fitted.history);
    report.metrics = evaluate(fitted.bundle, test_set);
    return report;
}

}  // namespace

CvReport cross_validate(std::span<const text::LabeledExample> examples, std::span<const std::string> label_names,
                        const PipelineConfig& config, const text::EmbeddingTable* pretrained) {
    config.train.validate();
    const auto labels = label_indices(examples, label_names);
    const FoldSplit split = stratified_kfold(labels, config.train.folds, config.train.seed);
    const std::size_t k = split.folds.size();

    CvReport report;
    report.label_names.assign(label_names.begin(), label_names.end());
    report.folds.resize(k);
    std::vector<std::exception_ptr> errors(k);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t f = next++; f < k; f = next++) {
            try {
                report.folds[f] = run_fold(examples, label_names, split, f, config, pretrained);
            } catch (...) {
                errors[f] = std::current_exception();
            }
        }
    };
    const std::size_t jobs = std::clamp<std::size_t>(config.jobs, 1, k);
    std::vector<std::thread> pool;
    for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (std::size_t f = 0; f < k; ++f) {
        if (!errors[f]) continue;
        try {
            std::rethrow_exception(errors[f]);
        } catch (const std::exception& e) {
            throw Error(fmt::format("fold {}: {}", f, e.what()));
        }
    }

    double sum = 0.0;
    for (const auto& fold : report.folds) {
        sum += fold.metrics.weighted_f1;
        report.pooled_confusion = add_confusion(report.pooled_confusion, fold.metrics.confusion);
    }
    report.mean_weighted_f1 = sum / static_cast<double>(k);
    report.pooled_weighted_f1 = weighted_f1(report.pooled_confusion);
    return report;
}

}  // namespace ctxattn::train
