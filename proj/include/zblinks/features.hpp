#pragma once

#include <span>
#include <string>

#include "zblinks/model.hpp"

namespace zblinks {

inline constexpr int kYearCap = 5;

// Title: 1 - 2*LCS/(|A|+|B|) over title token sequences.
// Authors: 1 - Jaccard over author keys.
// Year: min(|dy|, 5) / 5.
FeatureVector extract_features(const ZbRecord& zb, const ArxivRecord& cand);

double title_dissimilarity(std::string_view a, std::string_view b);
double author_dissimilarity(std::span<const std::string> a, std::span<const std::string> b);
double year_dissimilarity(int a, int b);

// Length of the longest common subsequence of two token sequences.
std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

}  // namespace zblinks
