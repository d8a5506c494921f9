#include "ctxattn/vocab.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "ctxattn/errors.hpp"
#include "ctxattn/tokenizer.hpp"

namespace ctxattn::text {

const std::vector<std::string>& Vocab::reserved_tokens() {
    static const std::vector<std::string> reserved{
        std::string(kPadToken),    std::string(kUnkToken),    std::string(kUrlToken),
        std::string(kUserToken),   std::string(kNumberToken), std::string(kHashtagToken),
    };
    return reserved;
}

Vocab::Vocab() {
    for (const auto& t : reserved_tokens()) push(t);
}

Vocab Vocab::from_tokens(std::vector<std::string> tokens) {
    const auto& reserved = reserved_tokens();
    if (tokens.size() < reserved.size() || !std::equal(reserved.begin(), reserved.end(), tokens.begin())) {
        throw FormatError("vocabulary does not start with the reserved tokens");
    }
    Vocab v;
    for (std::size_t i = reserved.size(); i < tokens.size(); ++i) {
        if (v.find(tokens[i])) throw FormatError("duplicate vocabulary token: " + tokens[i]);
        v.push(std::move(tokens[i]));
    }
    return v;
}

TokenId Vocab::push(std::string token) {
    const auto id = static_cast<TokenId>(tokens_.size());
    ids_.emplace(token, id);
    tokens_.push_back(std::move(token));
    return id;
}

std::optional<TokenId> Vocab::find(std::string_view token) const {
    auto it = ids_.find(std::string(token));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

TokenId Vocab::id(std::string_view token) const { return find(token).value_or(kUnkId); }

const std::string& Vocab::token(TokenId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
        throw ArgumentError(fmt::format("token id {} outside vocabulary of size {}", id, tokens_.size()));
    }
    return tokens_[static_cast<std::size_t>(id)];
}

Vocab build_vocab(std::span<const std::vector<std::string>> tokenized, std::size_t min_freq) {
    if (min_freq < 1) throw ArgumentError("min_freq must be at least 1");
    std::map<std::string, std::size_t> counts;
    for (const auto& tokens : tokenized) {
        for (const auto& t : tokens) ++counts[t];
    }
    Vocab vocab;
    std::vector<std::pair<std::string, std::size_t>> kept;
    for (auto& [token, n] : counts) {
        if (n >= min_freq && !vocab.find(token)) kept.emplace_back(token, n);
    }
    std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> ordered = vocab.tokens();
    for (auto& [token, n] : kept) ordered.push_back(token);
    return Vocab::from_tokens(std::move(ordered));
}

Vocab build_vocab(std::span<const LabeledExample> examples, std::size_t min_freq) {
    std::vector<std::vector<std::string>> tokenized;
    tokenized.reserve(examples.size());
    for (const auto& ex : examples) tokenized.push_back(tokenize(ex.text));
    return build_vocab(std::span<const std::vector<std::string>>(tokenized), min_freq);
}

TokenSequence encode(std::span<const std::string> tokens, const Vocab& vocab, std::size_t max_len) {
    if (max_len < 1) throw ArgumentError("max_len must be at least 1");
    TokenSequence seq;
    seq.length = std::min(tokens.size(), max_len);
    seq.tokens.assign(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(seq.length));
    seq.ids.assign(max_len, kPadId);
    for (std::size_t i = 0; i < seq.length; ++i) seq.ids[i] = vocab.id(tokens[i]);
    return seq;
}

}  // namespace ctxattn::text
