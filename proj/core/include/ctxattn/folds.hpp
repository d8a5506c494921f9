#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ctxattn::train {

struct FoldSplit {
    std::vector<std::vector<std::size_t>> folds;             ///< example indices, ascending
    std::vector<std::vector<std::size_t>> class_histograms;  ///< [fold][class] counts
    std::vector<std::string> warnings;

    /// All indices not in fold `k`, ascending.
    std::vector<std::size_t> training_indices(std::size_t k) const;
};

/// Stratified k-fold split. Each class's indices are shuffled with
/// Rng(seed) (classes in index order, one stream) and dealt round-robin;
/// the deal continues from the fold where the previous class stopped so
/// fold sizes stay balanced. A class with fewer than k examples produces
/// a warning rather than an error. Throws ArgumentError when k < 2 or
/// k exceeds the number of examples.
FoldSplit stratified_kfold(std::span<const std::size_t> labels, std::size_t k, std::uint64_t seed);

}  // namespace ctxattn::train
