#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <unordered_set>
#include <string>
#include <vector>

#include "ctxattn/embeddings.hpp"
#include "ctxattn/folds.hpp"
#include "ctxattn/metrics.hpp"
#include "ctxattn/model.hpp"
#include "ctxattn/trainer.hpp"

namespace ctxattn::train {

/// Everything needed to go from labeled text to a trained bundle.
struct PipelineConfig {
    model::ModelConfig model;  ///< classes and embed_dim are filled in from the data
    TrainConfig train;
    std::size_t min_freq = 2;
    std::size_t jobs = 1;
};

struct FittedModel {
    model::ModelBundle bundle;
    std::vector<EpochStats> history;
    std::size_t embeddings_found = 0;
    std::size_t embeddings_missing = 0;
};

/// Maps string labels to indices of `label_names`; throws ArgumentError on
/// an unknown label.
std::vector<std::size_t> label_indices(std::span<const text::LabeledExample> examples,
                                       std::span<const std::string> label_names);

/// Builds the vocabulary from `examples` only, the embedding matrix from
/// `pretrained` (random rows when null or missing), initializes a model
/// from Rng(seed) and trains it with the same stream.
FittedModel fit(std::span<const text::LabeledExample> examples, std::span<const std::string> label_names,
                const PipelineConfig& config, const text::EmbeddingTable* pretrained, std::uint64_t seed);

MetricsReport evaluate(const model::ModelBundle& bundle, std::span<const text::LabeledExample> examples);

struct FoldReport {
    std::size_t fold = 0;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    std::size_t vocab_size = 0;
    std::size_t embeddings_found = 0;
    std::size_t embeddings_missing = 0;
    std::vector<EpochStats> history;
    MetricsReport metrics;
};

struct CvReport {
    std::vector<std::string> label_names;
    std::vector<FoldReport> folds;
    double mean_weighted_f1 = 0.0;  ///< unweighted mean over folds
    double pooled_weighted_f1 = 0.0;
    ConfusionMatrix pooled_confusion;
};

/// Stratified k-fold (k = config.train.folds, seed = config.train.seed).
/// Fold i trains with seed + i on the other folds, rebuilding vocabulary
/// and embeddings from its training part only. Up to config.jobs folds run
/// concurrently; results do not depend on jobs. Errors are rethrown with
/// the fold index prefixed.
CvReport cross_validate(std::span<const text::LabeledExample> examples, std::span<const std::string> label_names,
                        const PipelineConfig& config, const text::EmbeddingTable* pretrained);

/// Distinct tokens of all texts; used to pre-filter an embedding file.
std::unordered_set<std::string> corpus_tokens(std::span<const text::LabeledExample> examples);

}  // namespace ctxattn::train
