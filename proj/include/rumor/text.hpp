#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace rumor {

// Lowercased word tokens. Whitespace-separated chunks that look like URLs
// (http://, https://, www.) or @mentions are dropped; the rest are split on
// punctuation. '#' is a separator, so "#Munich" yields "munich".
std::vector<std::string> tokenize(std::string_view text);

std::size_t count_url_chunks(std::string_view text);
std::size_t count_mention_chunks(std::string_view text);

// Number of UTF-8 code points (invalid bytes count as one each).
std::size_t utf8_length(std::string_view text);

std::string to_lower_ascii(std::string_view text);

}  // namespace rumor
