// Short-text tokenizer. Lowercases (ASCII), keeps URLs, @-mentions,
// #hashtags and emoji as single tokens, strips punctuation elsewhere.
// Apostrophes and non-ASCII letters stay inside word tokens.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "graded/core.hpp"

namespace graded {

struct TokenSequence {
    std::vector<std::string> tokens;

    std::size_t size() const { return tokens.size(); }
    bool empty() const { return tokens.empty(); }
    const std::string& operator[](std::size_t i) const { return tokens[i]; }
    auto begin() const { return tokens.begin(); }
    auto end() const { return tokens.end(); }
};

namespace utf8 {

// Decodes the codepoint starting at s[i]; advances i. Invalid bytes are
// consumed one at a time and returned as U+FFFD.
inline char32_t decode(std::string_view s, std::size_t& i) {
    const auto byte = [&](std::size_t k) -> std::uint8_t {
        return static_cast<std::uint8_t>(s[k]);
    };
    std::uint8_t b0 = byte(i);
    if (b0 < 0x80) {
        i += 1;
        return b0;
    }
    auto cont = [&](std::size_t k) {
        return k < s.size() && (byte(k) & 0xC0) == 0x80;
    };
    if ((b0 & 0xE0) == 0xC0 && cont(i + 1)) {
        char32_t cp = (char32_t(b0 & 0x1F) << 6) | (byte(i + 1) & 0x3F);
        i += 2;
        return cp;
    }
    if ((b0 & 0xF0) == 0xE0 && cont(i + 1) && cont(i + 2)) {
        char32_t cp = (char32_t(b0 & 0x0F) << 12) | (char32_t(byte(i + 1) & 0x3F) << 6) |
                      (byte(i + 2) & 0x3F);
        i += 3;
        return cp;
    }
    if ((b0 & 0xF8) == 0xF0 && cont(i + 1) && cont(i + 2) && cont(i + 3)) {
        char32_t cp = (char32_t(b0 & 0x07) << 18) | (char32_t(byte(i + 1) & 0x3F) << 12) |
                      (char32_t(byte(i + 2) & 0x3F) << 6) | (byte(i + 3) & 0x3F);
        i += 4;
        return cp;
    }
    i += 1;
    return 0xFFFD;
}

inline void append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::size_t count_codepoints(std::string_view s) {
    std::size_t n = 0, i = 0;
    while (i < s.size()) {
        decode(s, i);
        n++;
    }
    return n;
}

}  // namespace utf8

inline bool is_emoji_codepoint(char32_t cp) {
    return (cp >= 0x1F000 && cp <= 0x1FAFF) ||  // emoticons, symbols, flags
           (cp >= 0x2600 && cp <= 0x27BF) ||    // misc symbols, dingbats
           (cp >= 0x2B00 && cp <= 0x2BFF) ||    // stars, arrows
           cp == 0x2764;                        // heavy heart (in 2600 range anyway)
}

namespace detail {

inline bool is_word_codepoint(char32_t cp) {
    if (cp < 0x80)
        return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
               (cp >= '0' && cp <= '9') || cp == '\'';
    // Non-ASCII, non-emoji codepoints are treated as letters so that
    // accented and non-Latin words survive intact.
    return !is_emoji_codepoint(cp) && !(cp >= 0x2000 && cp <= 0x206F);
}

inline char32_t ascii_lower(char32_t cp) {
    return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
}

inline bool has_prefix(std::string_view s, std::string_view p) {
    return s.size() >= p.size() && s.substr(0, p.size()) == p;
}

inline bool is_url(std::string_view chunk) {
    return has_prefix(chunk, "http://") || has_prefix(chunk, "https://") ||
           has_prefix(chunk, "www.");
}

inline std::string lowered(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s)
        out.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c);
    return out;
}

}  // namespace detail

inline bool is_url_token(std::string_view token) { return detail::is_url(token); }
inline bool is_mention_token(std::string_view token) {
    return token.size() > 1 && token[0] == '@';
}
inline bool is_hashtag_token(std::string_view token) {
    return token.size() > 1 && token[0] == '#';
}
inline bool is_emoji_token(std::string_view token) {
    std::size_t i = 0;
    char32_t cp = utf8::decode(token, i);
    return i == token.size() && is_emoji_codepoint(cp);
}

inline TokenSequence tokenize(std::string_view text) {
    TokenSequence seq;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            // Trim bare apostrophes so quoting doesn't create tokens.
            std::size_t b = current.find_first_not_of('\'');
            std::size_t e = current.find_last_not_of('\'');
            if (b == std::string::npos)
                current.clear();
            else
                current = current.substr(b, e - b + 1);
            if (!current.empty()) seq.tokens.push_back(current);
            current.clear();
        }
    };

    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            flush();
            i++;
            continue;
        }
        // URL: everything to the next whitespace is one token.
        std::string_view rest = text.substr(i);
        if (current.empty() && detail::is_url(rest)) {
            std::size_t end = i;
            while (end < n && !std::isspace(static_cast<unsigned char>(text[end]))) end++;
            seq.tokens.push_back(detail::lowered(text.substr(i, end - i)));
            i = end;
            continue;
        }
        if ((c == '@' || c == '#') && current.empty()) {
            // Mention / hashtag: marker plus following word chars.
            std::size_t j = i + 1;
            std::string tok(1, c);
            while (j < n) {
                std::size_t k = j;
                char32_t cp = utf8::decode(text, k);
                if (!detail::is_word_codepoint(cp) || cp == '\'') break;
                utf8::append(tok, detail::ascii_lower(cp));
                j = k;
            }
            if (tok.size() > 1) {
                seq.tokens.push_back(tok);
                i = j;
                continue;
            }
            i++;  // lone marker: punctuation
            continue;
        }
        std::size_t k = i;
        char32_t cp = utf8::decode(text, k);
        if (is_emoji_codepoint(cp)) {
            flush();
            std::string tok;
            utf8::append(tok, cp);
            seq.tokens.push_back(tok);
            i = k;
            continue;
        }
        if (detail::is_word_codepoint(cp)) {
            utf8::append(current, detail::ascii_lower(cp));
            i = k;
        } else {
            flush();
            i = k;
        }
    }
    flush();
    return seq;
}

}  // namespace graded
