#pragma once

// Batch matching. match_all runs records in parallel with OpenMP;
// match_all_serial is the single-threaded reference the tests compare against.

#include <span>
#include <vector>

#include "zblinks/matcher.hpp"

namespace zblinks {

std::vector<MatchResult> match_all(std::span<const ZbRecord* const> records, const ArxivCatalog& arxiv,
                                   const DecisionTree& tree, std::size_t k = kDefaultCandidates);

std::vector<MatchResult> match_all_serial(std::span<const ZbRecord* const> records, const ArxivCatalog& arxiv,
                                          const DecisionTree& tree, std::size_t k = kDefaultCandidates);

std::vector<const ZbRecord*> record_pointers(std::span<const ZbRecord> records);

// Threads used by match_all; 0 restores the OpenMP default.
void set_match_threads(int threads);

}  // namespace zblinks
