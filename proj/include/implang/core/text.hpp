#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace implang::text {

std::string lower(std::string_view s);
std::string trim(std::string_view s);

/// Maximal runs of ASCII letters/digits, lowercased; hyphens and
/// apostrophes inside a word are dropped ("sep-ka" -> "sepka").
std::vector<std::string> words(std::string_view s);

/// True if `word` occurs in `s` delimited by non-letters (case-insensitive).
bool contains_word(std::string_view s, std::string_view word);

std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::vector<std::string> split(std::string_view s, char sep);

/// Replaces every occurrence of `from` with `to`.
std::string replace_all(std::string_view s, std::string_view from, std::string_view to);

/// "two" .. "nine" etc. for 0..20.
std::string number_word(int n);

}  // namespace implang::text
