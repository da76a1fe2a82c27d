#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "synth.hpp"
#include "zblinks/error.hpp"
#include "zblinks/serialize.hpp"
#include "zblinks/tree.hpp"

using namespace zblinks;
namespace zt = zblinks::testing;
namespace fs = std::filesystem;

namespace {

std::vector<LabeledSample> fixture_samples() {
    std::ifstream in(fs::path(ZBLINKS_TEST_DATA) / "tree8" / "samples.json");
    std::vector<LabeledSample> out;
    for (const auto& s : Json::parse(in)) out.push_back({s.at("features").get<FeatureVector>(), s.at("label").get<bool>()});
    return out;
}

// Compares against the frozen nested form written by the fixture script.
std::string compare_frozen(const DecisionTree& tree, std::int32_t id, const Json& want) {
    const auto& n = tree.nodes().at(static_cast<std::size_t>(id));
    if (n.is_leaf != want.at("leaf").get<bool>()) return "shape";
    if (n.is_leaf) return n.label == want.at("label").get<bool>() ? "" : "label";
    if (n.feature != want.at("feature").get<int>() || n.threshold != want.at("threshold").get<double>()) return "split";
    auto l = compare_frozen(tree, n.left, want.at("left"));
    return l.empty() ? compare_frozen(tree, n.right, want.at("right")) : l;
}

std::vector<LabeledSample> random_samples(zt::Gen& g, std::size_t n) {
    std::vector<LabeledSample> s;
    for (std::size_t i = 0; i < n; ++i) {
        // quantized so equal values and equal-impurity splits are common
        const double t = static_cast<double>(g.below(6)) / 5.0;
        const double a = static_cast<double>(g.below(4)) / 3.0;
        const double y = static_cast<double>(g.below(6)) / 5.0;
        const bool label = (t + a < 0.9) != g.chance(0.15);
        s.push_back({FeatureVector(t, a, y), label});
    }
    return s;
}

}  // namespace

TEST(Tree, AllTrueGivesSingleLeaf) {
    std::vector<LabeledSample> s = {{FeatureVector(0.1, 0, 0), true}, {FeatureVector(0.9, 1, 1), true}};
    const auto t = train_tree(s);
    ASSERT_EQ(t.nodes().size(), 1u);
    EXPECT_TRUE(t.nodes()[0].is_leaf);
    EXPECT_TRUE(t.predict(FeatureVector(1, 1, 1)));
}

TEST(Tree, OneDimensionalSeparable) {
    std::vector<LabeledSample> s = {{FeatureVector(0.1, 0, 0), true}, {FeatureVector(0.9, 0, 0), false}};
    const auto t = train_tree(s);
    ASSERT_EQ(t.nodes().size(), 3u);
    const auto& root = t.nodes()[0];
    EXPECT_FALSE(root.is_leaf);
    EXPECT_EQ(root.feature, 0);
    EXPECT_EQ(root.threshold, 0.5);
    EXPECT_TRUE(t.nodes()[root.left].label);
    EXPECT_FALSE(t.nodes()[root.right].label);
    EXPECT_TRUE(t.predict(FeatureVector(0.1, 0.7, 0.3)));
    EXPECT_FALSE(t.predict(FeatureVector(0.5, 0, 0)));  // at the threshold: right
    EXPECT_TRUE(t.predict(FeatureVector(0.4999999, 0, 0)));
}

TEST(Tree, MajorityTiesGoFalse) {
    // identical features, mixed labels: no split possible
    std::vector<LabeledSample> s = {{FeatureVector(0.3, 0.3, 0.3), true}, {FeatureVector(0.3, 0.3, 0.3), false}};
    const auto t = train_tree(s);
    ASSERT_EQ(t.nodes().size(), 1u);
    EXPECT_FALSE(t.nodes()[0].label);
}

TEST(Tree, EmptyTrainingSet) {
    try {
        train_tree({});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::EmptyTrainingSet);
    }
}

TEST(Tree, EightSampleFixtureMatchesOracleAndFrozenTree) {
    const auto samples = fixture_samples();
    ASSERT_EQ(samples.size(), 8u);
    const TreeParams params;
    const auto tree = train_tree(samples, params);
    EXPECT_EQ(zt::compare_tree(tree, *zt::oracle_tree(samples, params)), "");
    std::ifstream in(fs::path(ZBLINKS_TEST_DATA) / "tree8" / "expected_tree.json");
    EXPECT_EQ(compare_frozen(tree, 0, Json::parse(in)), "");
    std::size_t internal = 0;
    for (const auto& n : tree.nodes()) internal += n.is_leaf ? 0 : 1;
    EXPECT_EQ(internal, 2u);
    for (int run = 0; run < 5; ++run) EXPECT_EQ(train_tree(samples, params), tree);
}

TEST(Tree, RandomSetsMatchExhaustiveOracle) {
    zt::Gen g(31);
    for (int round = 0; round < 300; ++round) {
        const auto samples = random_samples(g, 1 + g.below(60));
        TreeParams params;
        params.max_depth = static_cast<int>(g.below(6));
        params.min_leaf = 1 + g.below(4);
        const auto tree = train_tree(samples, params);
        EXPECT_EQ(zt::compare_tree(tree, *zt::oracle_tree(samples, params)), "") << "round " << round;
        EXPECT_LE(tree.depth(), params.max_depth);
        EXPECT_EQ(train_tree(samples, params), tree);
    }
}

TEST(Tree, UnrestrictedTreeFitsConsistentData) {
    zt::Gen g(37);
    for (int round = 0; round < 50; ++round) {
        std::vector<LabeledSample> s;
        for (int i = 0; i < 30; ++i) {
            FeatureVector fv(g.unit(), g.unit(), g.unit());
            s.push_back({fv, fv[0] + fv[1] < 0.8});
        }
        TreeParams p;
        p.max_depth = 64;
        p.min_leaf = 1;
        const auto t = train_tree(s, p);
        for (const auto& x : s) EXPECT_EQ(t.predict(x.features), x.label);
    }
}

TEST(Tree, JsonRoundTripAndValidation) {
    const auto tree = train_tree(fixture_samples());
    EXPECT_EQ(DecisionTree::from_json(tree.to_json()), tree);
    const auto path = fs::temp_directory_path() / "zblinks_tree_test.json";
    tree.save(path);
    EXPECT_EQ(DecisionTree::load(path), tree);
    fs::remove(path);

    TreeParams p;
    EXPECT_THROW(DecisionTree({TreeNode{false, false, 0, 0.5, 1, 5}, TreeNode::leaf(true)}, p), Error);  // dangling
    EXPECT_THROW(DecisionTree({TreeNode{false, false, 0, 0.5, 0, 1}, TreeNode::leaf(true)}, p), Error);  // cycle
    EXPECT_THROW(DecisionTree({TreeNode::leaf(true), TreeNode::leaf(false)}, p), Error);                // unreachable
    EXPECT_THROW(DecisionTree({TreeNode{false, false, 3, 0.5, 1, 2}, TreeNode::leaf(true), TreeNode::leaf(false)}, p),
                 Error);  // feature index
    TreeParams shallow;
    shallow.max_depth = 0;
    EXPECT_THROW(DecisionTree({TreeNode{false, false, 0, 0.5, 1, 2}, TreeNode::leaf(true), TreeNode::leaf(false)}, shallow),
                 Error);
    auto j = tree.to_json();
    j["magic"] = "nope";
    EXPECT_THROW(DecisionTree::from_json(j), Error);
}
