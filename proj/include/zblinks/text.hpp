#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace zblinks {

// Lowercases, folds diacritics to ASCII where a single-letter fold exists,
// and splits on anything that is not a letter or digit. Input is UTF-8;
// invalid sequences act as separators.
std::vector<std::string> tokenize(std::string_view text);

// Normalized author key: folded family name plus first initial of the given
// names ("Olver, F. W. J." and "Frank W. J. Olver" both give "olver f").
// Accepts "Family, Given" and "Given Family" forms.
std::string author_key(std::string_view display_name);

std::vector<std::string> author_keys(std::span<const std::string> authors);

}  // namespace zblinks
