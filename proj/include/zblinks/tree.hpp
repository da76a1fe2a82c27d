#pragma once

// Binary axis-aligned decision tree over FeatureVector. Evaluation goes left
// when feature < threshold, right otherwise.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

#include "zblinks/model.hpp"

namespace zblinks {

struct TreeParams {
    int max_depth = 5;
    std::size_t min_leaf = 2;  // nodes with fewer samples are not split
    std::uint64_t seed = 42;   // recorded with the tree; induction itself is deterministic

    bool operator==(const TreeParams&) const = default;
};

struct TreeNode {
    bool is_leaf = true;
    bool label = false;  // leaves only
    int feature = 0;     // internal nodes: 0 title, 1 author, 2 year
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;

    static TreeNode leaf(bool label) { return {true, label, 0, 0.0, -1, -1}; }
    bool operator==(const TreeNode&) const = default;
};

struct LabeledSample {
    FeatureVector features;
    bool label = false;
};

class DecisionTree {
public:
    // Node 0 is the root. Throws Errc::InvalidValue on dangling children,
    // cycles, or depth beyond params.max_depth.
    DecisionTree(std::vector<TreeNode> nodes, TreeParams params);

    bool predict(const FeatureVector& fv) const;
    int depth() const;

    const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
    const TreeParams& params() const noexcept { return params_; }

    nlohmann::json to_json() const;
    static DecisionTree from_json(const nlohmann::json& doc);
    void save(const std::filesystem::path& path) const;
    static DecisionTree load(const std::filesystem::path& path);

    bool operator==(const DecisionTree&) const = default;

private:
    std::vector<TreeNode> nodes_;
    TreeParams params_;
};

// Greedy top-down induction minimizing weighted Gini impurity. Candidate
// thresholds are midpoints between consecutive distinct values; the first
// best split in (feature, threshold) order wins. Leaves take the majority
// label, ties going to false. Throws Errc::EmptyTrainingSet.
DecisionTree train_tree(std::span<const LabeledSample> samples, TreeParams params = {});

}  // namespace zblinks
