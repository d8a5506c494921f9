#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ctxattn/rng.hpp"
#include "ctxattn/tensor.hpp"
#include "ctxattn/vocab.hpp"

namespace ctxattn::text {

/// Word vectors read from a text embedding file, keyed by token.
struct EmbeddingTable {
    std::size_t dim = 0;
    std::unordered_map<std::string, std::vector<double>> vectors;
};

/// Reads "token v1 ... vD" records separated by single spaces. A first line
/// of exactly two integers is treated as a "count dim" header. When
/// `expected_dim` is 0 the dimension is taken from the header or the first
/// record. When `keep` is given, only tokens in it are stored. The first
/// occurrence of a duplicated token wins.
/// Throws IoError when unreadable and FormatError (with line number) when a
/// record's value count differs from the dimension or a value is not a real.
EmbeddingTable read_embedding_table(const std::filesystem::path& path, std::size_t expected_dim = 0,
                                    const std::unordered_set<std::string>* keep = nullptr);

struct EmbeddingMatrix {
    nn::Tensor2 weights;  ///< |vocab| x dim
    std::size_t found = 0;
    std::size_t missing = 0;  ///< non-PAD rows that were randomly initialized
};

/// Range of the uniform initializer for tokens without a pretrained vector.
inline constexpr double kEmbeddingInitRange = 0.05;

/// Row 0 (PAD) is zero. Rows whose token is in `table` are copied. Every
/// other row, in id order, takes `dim` successive rng.uniform(-0.05, 0.05)
/// draws.
EmbeddingMatrix build_embedding_matrix(const EmbeddingTable& table, const Vocab& vocab, nn::Rng& rng);

/// Random-only matrix (no pretrained vectors).
EmbeddingMatrix random_embedding_matrix(const Vocab& vocab, std::size_t dim, nn::Rng& rng);

/// read_embedding_table restricted to `vocab`, then build_embedding_matrix.
EmbeddingMatrix load_embeddings(const std::filesystem::path& path, const Vocab& vocab, std::size_t dim,
                                nn::Rng& rng);

}  // namespace ctxattn::text
