#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ctxattn::text {

using TokenId = std::int32_t;

inline constexpr TokenId kPadId = 0;
inline constexpr TokenId kUnkId = 1;
inline constexpr std::string_view kPadToken = "<pad>";
inline constexpr std::string_view kUnkToken = "<unk>";

/// Token <-> id table. Ids 0..5 are reserved: <pad>, <unk>, <url>, <user>,
/// <number>, <hashtag>.
class Vocab {
public:
    /// A vocabulary holding only the reserved tokens.
    Vocab();

    /// Rebuilds from an id-ordered token list, which must start with the
    /// reserved tokens and contain no duplicates.
    static Vocab from_tokens(std::vector<std::string> tokens);

    static const std::vector<std::string>& reserved_tokens();

    std::size_t size() const noexcept { return tokens_.size(); }
    std::optional<TokenId> find(std::string_view token) const;
    /// Id of `token`, or kUnkId.
    TokenId id(std::string_view token) const;
    const std::string& token(TokenId id) const;
    const std::vector<std::string>& tokens() const noexcept { return tokens_; }

    friend bool operator==(const Vocab& a, const Vocab& b) { return a.tokens_ == b.tokens_; }

private:
    TokenId push(std::string token);

    std::vector<std::string> tokens_;
    std::unordered_map<std::string, TokenId> ids_;
};

struct LabeledExample {
    std::string text;
    std::string label;
};

/// Reserved tokens plus every corpus token seen at least `min_freq` times,
/// ordered by frequency descending then token bytes ascending.
Vocab build_vocab(std::span<const LabeledExample> examples, std::size_t min_freq);
/// Same, over texts that have already been tokenized.
Vocab build_vocab(std::span<const std::vector<std::string>> tokenized, std::size_t min_freq);

/// Normalized tokens of one message plus their ids. `ids` is padded with
/// kPadId to max_len; `tokens` holds only the first `length` real tokens.
struct TokenSequence {
    std::vector<std::string> tokens;
    std::vector<TokenId> ids;
    std::size_t length = 0;

    std::span<const TokenId> real_ids() const { return {ids.data(), length}; }
};

/// Maps to ids (unknown -> kUnkId), keeps the first max_len tokens and
/// right-pads to max_len.
TokenSequence encode(std::span<const std::string> tokens, const Vocab& vocab, std::size_t max_len);

}  // namespace ctxattn::text
