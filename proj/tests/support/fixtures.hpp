#pragma once

// Loaders for the checked-in fixtures under tests/data.

#include <filesystem>
#include <string>
#include <vector>

#include "zblinks/matcher.hpp"
#include "zblinks/model.hpp"
#include "zblinks/tree.hpp"

namespace zblinks::testing {

std::filesystem::path data_path(const std::string& relative);

template <typename T>
std::vector<T> read_jsonl(const std::filesystem::path& file);

struct Eval20 {
    std::vector<ZbRecord> zb;
    std::vector<ArxivRecord> arxiv;
    std::vector<GroundTruthPair> pairs;
    DecisionTree tree;
};

Eval20 load_eval20();

}  // namespace zblinks::testing
