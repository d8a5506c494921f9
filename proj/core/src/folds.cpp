#include "ctxattn/folds.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "ctxattn/errors.hpp"
#include "ctxattn/rng.hpp"

namespace ctxattn::train {

std::vector<std::size_t> FoldSplit::training_indices(std::size_t k) const {
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        if (f != k) out.insert(out.end(), folds[f].begin(), folds[f].end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

FoldSplit stratified_kfold(std::span<const std::size_t> labels, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ArgumentError("cross-validation needs at least 2 folds");
    if (k > labels.size()) {
        throw ArgumentError(fmt::format("{} folds requested for {} examples", k, labels.size()));
    }
    const std::size_t classes = *std::max_element(labels.begin(), labels.end()) + 1;
    std::vector<std::vector<std::size_t>> by_class(classes);
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

    FoldSplit split;
    split.folds.resize(k);
    split.class_histograms.assign(k, std::vector<std::size_t>(classes, 0));

    nn::Rng rng(seed);
    std::size_t next_fold = 0;
    for (std::size_t c = 0; c < classes; ++c) {
        auto& members = by_class[c];
        if (!members.empty() && members.size() < k) {
            split.warnings.push_back(
                fmt::format("class {} has {} examples, fewer than {} folds", c, members.size(), k));
        }
        rng.shuffle(std::span<std::size_t>(members));
        for (std::size_t idx : members) {
            split.folds[next_fold].push_back(idx);
            ++split.class_histograms[next_fold][c];
            next_fold = (next_fold + 1) % k;
        }
    }
    for (auto& fold : split.folds) std::sort(fold.begin(), fold.end());
    return split;
}

}  // namespace ctxattn::train
