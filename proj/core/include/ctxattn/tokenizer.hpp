#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ctxattn::text {

inline constexpr std::string_view kUrlToken = "<url>";
inline constexpr std::string_view kUserToken = "<user>";
inline constexpr std::string_view kNumberToken = "<number>";
inline constexpr std::string_view kHashtagToken = "<hashtag>";

/// True for the four entity markers emitted by tokenize().
bool is_entity_marker(std::string_view token);

/// Social-media tokenizer. Steps, in order:
///  1. Unicode NFC normalization, then full lowercase.
///  2. URLs (http://, https://, www. up to the next whitespace) -> <url>.
///  3. @mentions -> <user>.
///  4. Numerals (digit groups joined by '.' or ',', not glued to letters) -> <number>.
///  5. #tag -> <hashtag> followed by the tag body, handled as an ordinary word.
///  6. In words, a letter repeated more than twice collapses to two (soooo -> soo).
///  7. Every punctuation or symbol code point is its own token.
///  8. Whitespace separates everything else.
/// Words are maximal runs of letters, marks, digits and '_'. Entity markers
/// already present in the input pass through untouched. Invalid UTF-8 bytes
/// are replaced with U+FFFD before processing.
std::vector<std::string> tokenize(std::string_view raw);

}  // namespace ctxattn::text
