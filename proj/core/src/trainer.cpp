#include "ctxattn/trainer.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "ctxattn/errors.hpp"
#include "ctxattn/ops.hpp"
#include "ctxattn/tokenizer.hpp"

namespace ctxattn::train {

void TrainConfig::validate() const {
    if (epochs < 1) throw ArgumentError("epochs must be at least 1");
    if (!(lr > 0.0)) throw ArgumentError("learning rate must be positive");
    if (batch_size < 1) throw ArgumentError("batch size must be at least 1");
    if (folds < 2) throw ArgumentError("folds must be at least 2");
    if (!(dropout >= 0.0) || dropout >= 1.0) throw ArgumentError("dropout outside [0, 1)");
}

std::vector<text::TokenId> encode_text(std::string_view raw, const text::Vocab& vocab, std::size_t max_len) {
    const auto tokens = text::tokenize(raw);
    if (tokens.empty()) return {text::kUnkId};
    const auto seq = text::encode(tokens, vocab, max_len);
    return {seq.ids.begin(), seq.ids.begin() + static_cast<std::ptrdiff_t>(seq.length)};
}

double accumulate_example(model::ModelBundle& bundle, const EncodedExample& example, nn::Rng& rng) {
    auto fwd = model::model_forward(bundle, example.ids, rng);
    const double loss = nn::cross_entropy(fwd.probs, example.label);
    model::model_backward(bundle, fwd.cache, nn::cross_entropy_grad(fwd.probs, example.label));
    return loss;
}

Trainer::Trainer(model::ModelBundle& bundle, TrainConfig config, nn::Rng& rng)
    : bundle_(bundle), config_(config), rng_(rng), adam_(nn::AdamState::for_store(bundle.params)) {
    config_.validate();
    bundle_.config.dropout = config_.dropout;
}

EpochStats Trainer::run_epoch(std::span<const EncodedExample> examples) {
    if (examples.empty()) throw ArgumentError("training set is empty");
    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (config_.shuffle) rng_.shuffle(std::span<std::size_t>(order));

    ++epochs_done_;
    double total_loss = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size(); start += config_.batch_size, ++batch_index) {
        const std::size_t end = std::min(order.size(), start + config_.batch_size);
        bundle_.params.zero_grad();
        double batch_loss = 0.0;
        for (std::size_t n = start; n < end; ++n) batch_loss += accumulate_example(bundle_, examples[order[n]], rng_);
        if (!std::isfinite(batch_loss)) {
            throw NumericError(fmt::format("non-finite loss {} at epoch {}, batch {}", batch_loss, epochs_done_,
                                           batch_index + 1));
        }
        bundle_.params.scale_grad(1.0 / static_cast<double>(end - start));
        nn::adam_step(bundle_.params, adam_, config_.adam());
        total_loss += batch_loss;
    }
    return {epochs_done_, total_loss / static_cast<double>(examples.size())};
}

std::vector<EpochStats> train(model::ModelBundle& bundle, std::span<const EncodedExample> examples,
                              const TrainConfig& config, nn::Rng& rng) {
    if (examples.empty()) throw ArgumentError("training set is empty");
    Trainer trainer(bundle, config, rng);
    std::vector<EpochStats> history;
    history.reserve(config.epochs);
    for (std::size_t e = 0; e < config.epochs; ++e) history.push_back(trainer.run_epoch(examples));
    return history;
}

std::vector<std::size_t> predict_labels(const model::ModelBundle& bundle, std::span<const EncodedExample> examples) {
    std::vector<std::size_t> out;
    out.reserve(examples.size());
    for (const auto& ex : examples) out.push_back(model::argmax(model::model_forward(bundle, ex.ids).probs));
    return out;
}

}  // namespace ctxattn::train
