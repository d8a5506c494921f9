#include "ctxattn/tokenizer.hpp"

#include <array>
#include <optional>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "ctxattn/errors.hpp"

namespace ctxattn::text {

namespace {

constexpr std::array<std::string_view, 4> kMarkers{kUrlToken, kUserToken, kNumberToken, kHashtagToken};

std::u32string normalize(std::string_view raw) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
    auto source = icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
    icu::UnicodeString text = nfc->normalize(source, status);
    if (U_FAILURE(status)) throw Error("NFC normalization failed");
    text.toLower(icu::Locale::getRoot());

    std::u32string out;
    out.reserve(static_cast<std::size_t>(text.length()));
    for (int32_t i = 0; i < text.length();) {
        const UChar32 c = text.char32At(i);
        out.push_back(static_cast<char32_t>(c));
        i += U16_LENGTH(c);
    }
    return out;
}

void append_utf8(std::string& out, char32_t c) {
    if (c < 0x80) {
        out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (c >> 6)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (c >> 12)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (c >> 18)));
        out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
}

std::string to_utf8(std::u32string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char32_t c : s) append_utf8(out, c);
    return out;
}

std::uint32_t category_mask(char32_t c) { return U_GET_GC_MASK(static_cast<UChar32>(c)); }

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

bool is_word(char32_t c) {
    return c == U'_' || (category_mask(c) & (U_GC_L_MASK | U_GC_M_MASK | U_GC_N_MASK)) != 0;
}

bool is_letter(char32_t c) { return (category_mask(c) & U_GC_L_MASK) != 0; }

bool is_digit(char32_t c) { return u_isdigit(static_cast<UChar32>(c)); }

bool is_mark(char32_t c) { return (category_mask(c) & U_GC_M_MASK) != 0; }

// Control and invisible format characters never form tokens.
bool is_ignorable(char32_t c) { return (category_mask(c) & (U_GC_CC_MASK | U_GC_CF_MASK)) != 0; }

bool starts_with(std::u32string_view s, std::size_t pos, std::u32string_view prefix) {
    return s.substr(pos, prefix.size()) == prefix;
}

/// Length of a numeral (digits, optionally joined by single '.' or ',') at `pos`.
std::size_t numeral_length(std::u32string_view s, std::size_t pos) {
    std::size_t i = pos;
    while (i < s.size() && is_digit(s[i])) ++i;
    if (i == pos) return 0;
    while (i + 1 < s.size() && (s[i] == U'.' || s[i] == U',') && is_digit(s[i + 1])) {
        ++i;
        while (i < s.size() && is_digit(s[i])) ++i;
    }
    return i - pos;
}

std::size_t word_length(std::u32string_view s, std::size_t pos) {
    std::size_t i = pos;
    while (i < s.size() && is_word(s[i])) ++i;
    return i - pos;
}

std::string finish_word(std::u32string_view word) {
    bool all_digits = true;
    for (char32_t c : word) all_digits = all_digits && is_digit(c);
    if (all_digits) return std::string(kNumberToken);

    std::u32string collapsed;
    collapsed.reserve(word.size());
    for (std::size_t i = 0; i < word.size(); ++i) {
        const char32_t c = word[i];
        const std::size_t n = collapsed.size();
        if (is_letter(c) && n >= 2 && collapsed[n - 1] == c && collapsed[n - 2] == c) continue;
        collapsed.push_back(c);
    }
    return to_utf8(collapsed);
}

std::optional<std::string_view> marker_at(std::u32string_view s, std::size_t pos) {
    for (auto marker : kMarkers) {
        if (pos + marker.size() > s.size()) continue;
        bool match = true;
        for (std::size_t k = 0; k < marker.size() && match; ++k) {
            match = s[pos + k] == static_cast<char32_t>(marker[k]);
        }
        if (match) return marker;
    }
    return std::nullopt;
}

}  // namespace

bool is_entity_marker(std::string_view token) {
    for (auto marker : kMarkers) {
        if (token == marker) return true;
    }
    return false;
}

std::vector<std::string> tokenize(std::string_view raw) {
    const std::u32string text = normalize(raw);
    const std::u32string_view s = text;
    std::vector<std::string> tokens;

    std::size_t i = 0;
    while (i < s.size()) {
        const char32_t c = s[i];
        if (is_space(c) || is_ignorable(c)) {
            ++i;
            continue;
        }
        if (c == U'<') {
            if (auto marker = marker_at(s, i)) {
                tokens.emplace_back(*marker);
                i += marker->size();
                continue;
            }
        }
        if (starts_with(s, i, U"http://") || starts_with(s, i, U"https://") || starts_with(s, i, U"www.")) {
            while (i < s.size() && !is_space(s[i])) ++i;
            tokens.emplace_back(kUrlToken);
            continue;
        }
        if (c == U'@' && i + 1 < s.size() && is_word(s[i + 1])) {
            i += 1 + word_length(s, i + 1);
            tokens.emplace_back(kUserToken);
            continue;
        }
        if (c == U'#' && i + 1 < s.size() && is_word(s[i + 1])) {
            const std::size_t len = word_length(s, i + 1);
            tokens.emplace_back(kHashtagToken);
            tokens.push_back(finish_word(s.substr(i + 1, len)));
            i += 1 + len;
            continue;
        }
        if (is_digit(c)) {
            const std::size_t len = numeral_length(s, i);
            if (i + len >= s.size() || !is_word(s[i + len])) {
                tokens.emplace_back(kNumberToken);
                i += len;
                continue;
            }
        }
        if (is_word(c)) {
            const std::size_t len = word_length(s, i);
            tokens.push_back(finish_word(s.substr(i, len)));
            i += len;
            continue;
        }
        // Punctuation or symbol: one token per code point, keeping any
        // combining marks and joiners that decorate it (emoji presentation).
        std::size_t end = i + 1;
        while (end < s.size() && (is_mark(s[end]) || s[end] == U'\u200D')) ++end;
        tokens.push_back(to_utf8(s.substr(i, end - i)));
        i = end;
    }
    return tokens;
}

}  // namespace ctxattn::text
