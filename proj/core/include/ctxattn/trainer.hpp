#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ctxattn/adam.hpp"
#include "ctxattn/model.hpp"
#include "ctxattn/rng.hpp"

namespace ctxattn::train {

struct TrainConfig {
    double lr = 0.001;
    std::size_t epochs = 10;
    double dropout = 0.2;
    std::size_t batch_size = 32;
    std::uint64_t seed = 0;
    std::size_t folds = 10;
    bool shuffle = true;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    void validate() const;
    nn::AdamConfig adam() const { return {lr, beta1, beta2, eps}; }
};

struct EncodedExample {
    std::vector<text::TokenId> ids;  ///< unpadded, never empty
    std::size_t label = 0;
};

/// Tokenize and encode one text. Texts with no tokens become a single <unk>
/// so every example can be scored.
std::vector<text::TokenId> encode_text(std::string_view text, const text::Vocab& vocab, std::size_t max_len);

struct EpochStats {
    std::size_t epoch = 0;  ///< 1-based
    double mean_loss = 0.0;
};

/// Cross-entropy of one example; accumulates its gradients into the bundle.
double accumulate_example(model::ModelBundle& bundle, const EncodedExample& example, nn::Rng& rng);

/// Mini-batch Adam on one bundle. Owns the optimizer state, so repeated
/// run_epoch calls continue a single optimization run.
class Trainer {
public:
    /// Sets bundle.config.dropout to config.dropout.
    Trainer(model::ModelBundle& bundle, TrainConfig config, nn::Rng& rng);

    /// Seeded shuffle (if enabled), then one Adam step per batch with
    /// gradients averaged over the batch. Throws NumericError naming the
    /// epoch, batch and loss if a batch loss is not finite.
    EpochStats run_epoch(std::span<const EncodedExample> examples);

    std::size_t epochs_done() const noexcept { return epochs_done_; }
    const nn::AdamState& optimizer_state() const noexcept { return adam_; }

private:
    model::ModelBundle& bundle_;
    TrainConfig config_;
    nn::Rng& rng_;
    nn::AdamState adam_;
    std::size_t epochs_done_ = 0;
};

/// Runs config.epochs epochs. Throws ArgumentError on an empty training set.
std::vector<EpochStats> train(model::ModelBundle& bundle, std::span<const EncodedExample> examples,
                              const TrainConfig& config, nn::Rng& rng);

std::vector<std::size_t> predict_labels(const model::ModelBundle& bundle, std::span<const EncodedExample> examples);

}  // namespace ctxattn::train
