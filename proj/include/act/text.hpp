#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace act::text {

/// Lowercases ASCII letters, turns every other non-alphanumeric byte into a
/// word break, collapses runs of breaks to one space and trims. Bytes >= 0x80
/// are kept as word characters so UTF-8 words survive intact.
std::string normalize(std::string_view raw);

/// Splits a normalized string into its words.
std::vector<std::string> words(std::string_view normalized);

/// True iff `needle` occurs in `haystack` as a run of consecutive whole words.
bool contains_words(const std::vector<std::string>& haystack,
                    const std::vector<std::string>& needle);

/// Splits on a single delimiter, keeping empty fields.
std::vector<std::string> split(std::string_view line, char delim);

}  // namespace act::text
