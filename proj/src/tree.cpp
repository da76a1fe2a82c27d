#include "zblinks/tree.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <optional>

#include "zblinks/error.hpp"

namespace zblinks {

namespace {

constexpr std::string_view kMagic = "zblinks-decision-tree";
constexpr int kFormatVersion = 1;

using Wide = unsigned __int128;

// Weighted Gini of a split, scaled by n/2, as an exact fraction
// (posL*negL*nR + posR*negR*nL) / (nL*nR).
struct Impurity {
    Wide num = 0;
    Wide den = 1;

    bool operator<(const Impurity& o) const { return num * o.den < o.num * den; }
};

Impurity split_impurity(std::uint64_t pos_l, std::uint64_t neg_l, std::uint64_t pos_r, std::uint64_t neg_r) {
    const Wide n_l = pos_l + neg_l;
    const Wide n_r = pos_r + neg_r;
    return {Wide(pos_l) * neg_l * n_r + Wide(pos_r) * neg_r * n_l, n_l * n_r};
}

struct Split {
    int feature = 0;
    double threshold = 0.0;
    Impurity impurity;
};

std::optional<Split> best_split(std::span<const LabeledSample> samples, std::span<const std::size_t> members) {
    std::optional<Split> best;
    std::uint64_t pos_total = 0;
    for (auto i : members) pos_total += samples[i].label ? 1 : 0;
    const std::uint64_t neg_total = members.size() - pos_total;

    std::vector<std::size_t> order(members.begin(), members.end());
    for (int f = 0; f < static_cast<int>(FeatureVector::kDims); ++f) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return samples[a].features[f] < samples[b].features[f];
        });
        std::uint64_t pos_l = 0;
        std::uint64_t neg_l = 0;
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            (samples[order[i]].label ? pos_l : neg_l) += 1;
            const double lo = samples[order[i]].features[f];
            const double hi = samples[order[i + 1]].features[f];
            if (!(lo < hi)) continue;
            const double mid = (lo + hi) / 2.0;
            if (!(lo < mid && mid <= hi)) continue;
            const Impurity imp = split_impurity(pos_l, neg_l, pos_total - pos_l, neg_total - neg_l);
            if (!best || imp < best->impurity) best = Split{f, mid, imp};
        }
    }
    return best;
}

class Builder {
public:
    Builder(std::span<const LabeledSample> samples, const TreeParams& params)
        : samples_(samples), params_(params) {}

    std::vector<TreeNode> run() {
        std::vector<std::size_t> all(samples_.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        grow(all, 0);
        return std::move(nodes_);
    }

private:
    std::int32_t grow(const std::vector<std::size_t>& members, int depth) {
        std::size_t pos = 0;
        for (auto i : members) pos += samples_[i].label ? 1 : 0;
        const std::size_t neg = members.size() - pos;
        const auto id = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back(TreeNode::leaf(pos > neg));

        if (depth >= params_.max_depth || members.size() < params_.min_leaf || pos == 0 || neg == 0) {
            return id;
        }
        const auto split = best_split(samples_, members);
        if (!split) return id;

        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (auto i : members) {
            (samples_[i].features[split->feature] < split->threshold ? left : right).push_back(i);
        }
        const auto l = grow(left, depth + 1);
        const auto r = grow(right, depth + 1);
        nodes_[id] = TreeNode{false, false, split->feature, split->threshold, l, r};
        return id;
    }

    std::span<const LabeledSample> samples_;
    const TreeParams& params_;
    std::vector<TreeNode> nodes_;
};

}  // namespace

DecisionTree::DecisionTree(std::vector<TreeNode> nodes, TreeParams params)
    : nodes_(std::move(nodes)), params_(params) {
    if (nodes_.empty()) throw Error(Errc::InvalidValue, "decision tree has no nodes");
    if (params_.max_depth < 0) throw Error(Errc::InvalidValue, "max_depth must be >= 0");
    // Every node must be reached exactly once from the root.
    std::vector<int> seen(nodes_.size(), 0);
    std::vector<std::pair<std::int32_t, int>> stack{{0, 0}};
    while (!stack.empty()) {
        const auto [id, depth] = stack.back();
        stack.pop_back();
        if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size()) {
            throw Error(Errc::InvalidValue, "decision tree child index out of range");
        }
        if (seen[id]++) throw Error(Errc::InvalidValue, "decision tree is not a tree");
        if (depth > params_.max_depth) throw Error(Errc::InvalidValue, "decision tree deeper than max_depth");
        const auto& node = nodes_[id];
        if (node.is_leaf) continue;
        if (node.feature < 0 || node.feature >= static_cast<int>(FeatureVector::kDims)) {
            throw Error(Errc::InvalidValue, "decision tree feature index out of range");
        }
        stack.emplace_back(node.left, depth + 1);
        stack.emplace_back(node.right, depth + 1);
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
        throw Error(Errc::InvalidValue, "decision tree has unreachable nodes");
    }
}

bool DecisionTree::predict(const FeatureVector& fv) const {
    const TreeNode* node = &nodes_[0];
    while (!node->is_leaf) {
        node = &nodes_[fv[node->feature] < node->threshold ? node->left : node->right];
    }
    return node->label;
}

int DecisionTree::depth() const {
    int deepest = 0;
    std::vector<std::pair<std::int32_t, int>> stack{{0, 0}};
    while (!stack.empty()) {
        const auto [id, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        if (!nodes_[id].is_leaf) {
            stack.emplace_back(nodes_[id].left, d + 1);
            stack.emplace_back(nodes_[id].right, d + 1);
        }
    }
    return deepest;
}

nlohmann::json DecisionTree::to_json() const {
    auto nodes = nlohmann::json::array();
    for (const auto& n : nodes_) {
        if (n.is_leaf) {
            nodes.push_back({{"leaf", true}, {"label", n.label}});
        } else {
            nodes.push_back({{"leaf", false},
                             {"feature", n.feature},
                             {"threshold", n.threshold},
                             {"left", n.left},
                             {"right", n.right}});
        }
    }
    return {{"magic", kMagic},
            {"version", kFormatVersion},
            {"params",
             {{"max_depth", params_.max_depth}, {"min_leaf", params_.min_leaf}, {"seed", params_.seed}}},
            {"nodes", std::move(nodes)}};
}

DecisionTree DecisionTree::from_json(const nlohmann::json& doc) {
    try {
        if (doc.value("magic", "") != kMagic) throw Error(Errc::Format, "not a decision tree file");
        if (doc.at("version").get<int>() != kFormatVersion) {
            throw Error(Errc::Format, "unsupported decision tree version");
        }
        const auto& p = doc.at("params");
        TreeParams params{p.at("max_depth").get<int>(), p.at("min_leaf").get<std::size_t>(),
                          p.at("seed").get<std::uint64_t>()};
        std::vector<TreeNode> nodes;
        for (const auto& n : doc.at("nodes")) {
            if (n.at("leaf").get<bool>()) {
                nodes.push_back(TreeNode::leaf(n.at("label").get<bool>()));
            } else {
                nodes.push_back(TreeNode{false, false, n.at("feature").get<int>(), n.at("threshold").get<double>(),
                                         n.at("left").get<std::int32_t>(), n.at("right").get<std::int32_t>()});
            }
        }
        return DecisionTree(std::move(nodes), params);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::Format, std::string("malformed decision tree: ") + e.what());
    }
}

void DecisionTree::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw Error(Errc::Io, "cannot write " + path.string());
    out << to_json().dump(2) << '\n';
    if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

DecisionTree DecisionTree::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open " + path.string());
    try {
        return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::Format, std::string("malformed decision tree: ") + e.what());
    }
}

DecisionTree train_tree(std::span<const LabeledSample> samples, TreeParams params) {
    if (samples.empty()) throw Error(Errc::EmptyTrainingSet, "cannot train a decision tree on zero samples");
    if (params.max_depth < 0) throw Error(Errc::InvalidValue, "max_depth must be >= 0");
    return DecisionTree(Builder(samples, params).run(), params);
}

}  // namespace zblinks
