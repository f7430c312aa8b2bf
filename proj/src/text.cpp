#include "rumor/text.hpp"

#include <algorithm>
#include <cstdint>

namespace rumor {

namespace {

struct CodePoint {
    char32_t value;
    std::size_t size;
};

CodePoint decode(std::string_view s, std::size_t i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    auto cont = [&](std::size_t k) -> int {
        if (i + k >= s.size()) return -1;
        const auto b = static_cast<unsigned char>(s[i + k]);
        return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
    };
    if (b0 < 0x80) return {b0, 1};
    if ((b0 & 0xE0) == 0xC0) {
        const int c1 = cont(1);
        if (c1 >= 0) return {static_cast<char32_t>(((b0 & 0x1F) << 6) | c1), 2};
    } else if ((b0 & 0xF0) == 0xE0) {
        const int c1 = cont(1), c2 = cont(2);
        if (c1 >= 0 && c2 >= 0) return {static_cast<char32_t>(((b0 & 0x0F) << 12) | (c1 << 6) | c2), 3};
    } else if ((b0 & 0xF8) == 0xF0) {
        const int c1 = cont(1), c2 = cont(2), c3 = cont(3);
        if (c1 >= 0 && c2 >= 0 && c3 >= 0)
            return {static_cast<char32_t>(((b0 & 0x07) << 18) | (c1 << 12) | (c2 << 6) | c3), 4};
    }
    return {0xFFFD, 1};
}

bool is_space(char32_t c) {
    switch (c) {
        case U' ': case U'\t': case U'\n': case U'\v': case U'\f': case U'\r':
        case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029: case 0x202F:
        case 0x205F: case 0x3000:
            return true;
        default:
            return c >= 0x2000 && c <= 0x200A;
    }
}

// ASCII punctuation (apostrophe excluded) and the General Punctuation block.
bool is_separator(char32_t c) {
    if (c < 0x80) {
        const auto ch = static_cast<char>(c);
        if (ch == '\'') return false;
        return !((ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9'));
    }
    return (c >= 0x2010 && c <= 0x205E) || c == 0xA1 || c == 0xBF || c == 0xAB || c == 0xBB;
}

template <typename Fn>
void for_each_chunk(std::string_view text, Fn&& fn) {
    std::size_t i = 0, start = 0;
    bool in_chunk = false;
    while (i < text.size()) {
        const CodePoint cp = decode(text, i);
        if (is_space(cp.value)) {
            if (in_chunk) fn(text.substr(start, i - start));
            in_chunk = false;
        } else if (!in_chunk) {
            in_chunk = true;
            start = i;
        }
        i += cp.size;
    }
    if (in_chunk) fn(text.substr(start));
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        char c = s[i];
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (c != prefix[i]) return false;
    }
    return true;
}

bool is_url_chunk(std::string_view chunk) {
    return starts_with_ci(chunk, "http://") || starts_with_ci(chunk, "https://") || starts_with_ci(chunk, "www.");
}

bool is_mention_chunk(std::string_view chunk) { return chunk.size() > 1 && chunk.front() == '@'; }

}  // namespace

std::string to_lower_ascii(std::string_view text) {
    std::string out(text);
    for (auto& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    auto emit = [&](std::string_view word) {
        while (!word.empty() && word.front() == '\'') word.remove_prefix(1);
        while (!word.empty() && word.back() == '\'') word.remove_suffix(1);
        if (!word.empty()) tokens.push_back(to_lower_ascii(word));
    };
    for_each_chunk(text, [&](std::string_view chunk) {
        if (is_url_chunk(chunk) || is_mention_chunk(chunk)) return;
        std::size_t i = 0, start = 0;
        while (i < chunk.size()) {
            const CodePoint cp = decode(chunk, i);
            if (is_separator(cp.value)) {
                emit(chunk.substr(start, i - start));
                start = i + cp.size;
            }
            i += cp.size;
        }
        emit(chunk.substr(start));
    });
    return tokens;
}

std::size_t count_url_chunks(std::string_view text) {
    std::size_t n = 0;
    for_each_chunk(text, [&](std::string_view chunk) { n += is_url_chunk(chunk) ? 1 : 0; });
    return n;
}

std::size_t count_mention_chunks(std::string_view text) {
    std::size_t n = 0;
    for_each_chunk(text, [&](std::string_view chunk) { n += is_mention_chunk(chunk) ? 1 : 0; });
    return n;
}

std::size_t utf8_length(std::string_view text) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < text.size(); i += decode(text, i).size) ++n;
    return n;
}

}  // namespace rumor
