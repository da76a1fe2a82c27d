#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "synth.hpp"
#include "zblinks/error.hpp"
#include "zblinks/features.hpp"
#include "zblinks/matcher.hpp"

using namespace zblinks;
namespace zt = zblinks::testing;

namespace {

ZbRecord zb(std::string id, std::string title, std::optional<std::string> doi, int year = 2000) {
    return ZbRecord(ZbRecordFields{std::move(id), std::move(title), {"Olver, F."}, {"33C05"}, year, std::move(doi), "", {}});
}

ArxivRecord ax(std::string id, std::string title, std::optional<std::string> doi, int year = 2000) {
    return ArxivRecord(ArxivRecordFields{std::move(id), std::move(title), {"Olver, F."}, year, std::move(doi), {}});
}

// accepts title < 0.5 and author < 0.5
DecisionTree simple_tree() {
    return DecisionTree({TreeNode{false, false, 0, 0.5, 1, 4}, TreeNode{false, false, 1, 0.5, 2, 3}, TreeNode::leaf(true),
                         TreeNode::leaf(false), TreeNode::leaf(false)},
                        TreeParams{});
}

std::vector<GroundTruthPair> mixed_pairs(std::size_t n, std::size_t negatives) {
    std::vector<GroundTruthPair> p;
    for (std::size_t i = 0; i < n; ++i) p.push_back({"z" + std::to_string(i), "a" + std::to_string(i), i >= negatives});
    return p;
}

}  // namespace

TEST(ChooseSmallestNorm, Examples) {
    std::vector<ExaminedCandidate> c = {{"2101.00001", FeatureVector(0.1, 0, 0), true},
                                        {"2101.00002", FeatureVector(0, 0.3, 0), true}};
    EXPECT_EQ(choose_smallest_norm(c), "2101.00001");
    c[0].verdict = false;
    EXPECT_EQ(choose_smallest_norm(c), "2101.00002");
    c[1].verdict = false;
    EXPECT_EQ(choose_smallest_norm(c), std::nullopt);
    EXPECT_EQ(choose_smallest_norm({}), std::nullopt);

    // equal norms: smaller id wins regardless of order
    std::vector<ExaminedCandidate> tie = {{"2101.00009", FeatureVector(0.3, 0, 0), true},
                                          {"2101.00003", FeatureVector(0, 0.3, 0), true}};
    EXPECT_EQ(choose_smallest_norm(tie), "2101.00003");
    std::reverse(tie.begin(), tie.end());
    EXPECT_EQ(choose_smallest_norm(tie), "2101.00003");
}

TEST(MatchRecord, PicksExactCopyAndRejectsUnrelated) {
    const ArxivCatalog arxiv({ax("2101.00001", "Asymptotics and special functions", std::nullopt),
                              ax("2101.00002", "Asymptotics of special integrals", std::nullopt),
                              ax("2101.00003", "Graph colourings", std::nullopt)});
    const auto tree = simple_tree();
    auto r = match_record(zb("0982.41018", "Asymptotics and special functions", std::nullopt), arxiv, tree, 3);
    EXPECT_EQ(r.zbl_id, "0982.41018");
    EXPECT_EQ(r.chosen_arxiv, "2101.00001");
    ASSERT_FALSE(r.candidates_examined.empty());
    EXPECT_LE(r.candidates_examined.size(), 3u);
    for (const auto& c : r.candidates_examined) {
        EXPECT_EQ(c.features, extract_features(zb("0982.41018", "Asymptotics and special functions", std::nullopt),
                                               *arxiv.find(c.arxiv_id)));
        EXPECT_EQ(c.verdict, simple_tree().predict(c.features));
    }

    auto none = match_record(zb("0001.00001", "Kac Moody algebras", std::nullopt), arxiv, tree, 3);
    EXPECT_EQ(none.chosen_arxiv, std::nullopt);

    // k=1 only looks at the top candidate
    auto one = match_record(zb("0982.41018", "Asymptotics and special functions", std::nullopt), arxiv, tree, 1);
    EXPECT_EQ(one.candidates_examined.size(), 1u);
}

TEST(MatchRecord, AgreesWithBruteForceWhenKCoversCorpus) {
    const auto c = zt::make_corpus({.zb_records = 60, .derived = 40, .distractors = 30, .seed = 5});
    const ArxivCatalog arxiv(c.arxiv);
    const auto tree = simple_tree();
    for (const auto& z : c.zb) {
        EXPECT_EQ(match_record(z, arxiv, tree, c.arxiv.size()).chosen_arxiv,
                  zt::bruteforce_match(z, c.arxiv, tree))
            << z.zbl_id();
    }
}

TEST(GroundTruth, SmallExamples) {
    const ZbCatalog one({zb("0001.00001", "Bessel functions", "10.1/a")});
    const std::vector<ArxivRecord> a1 = {ax("2101.00001", "Bessel functions", "10.1/a")};
    auto gt = build_ground_truth(one, a1);
    ASSERT_EQ(gt.pairs.size(), 1u);
    EXPECT_EQ(gt.pairs[0], (GroundTruthPair{"0001.00001", "2101.00001", true}));

    const std::vector<ArxivRecord> no_doi = {ax("2101.00001", "Bessel functions", std::nullopt)};
    gt = build_ground_truth(one, no_doi);
    EXPECT_TRUE(gt.pairs.empty());
    EXPECT_EQ(gt.without_doi, 1u);

    const ZbCatalog ambiguous({zb("0001.00001", "Bessel functions", "10.1/a"), zb("0001.00002", "Bessel", "10.1/a")});
    const std::vector<ArxivRecord> a2 = {ax("2101.00001", "Bessel functions", "10.1/a"),
                                         ax("2101.00002", "Bessel functions again", "10.1/a")};
    gt = build_ground_truth(ambiguous, a2);
    EXPECT_TRUE(gt.pairs.empty());
    EXPECT_EQ(gt.ambiguous_dois, std::vector<std::string>{"10.1/a"});
}

TEST(GroundTruth, ThreePositivesTwoNegatives) {
    const ZbCatalog zbc({zb("0001.00001", "Bessel functions of the first kind", "10.1/a"),
                         zb("0001.00002", "Hypergeometric identities", "10.1/b"),
                         zb("0001.00003", "Orthogonal polynomials on the circle", "10.1/c")});
    const std::vector<ArxivRecord> a = {
        ax("2101.00001", "Bessel functions of the first kind", "10.1/a"),
        ax("2101.00002", "Hypergeometric identities", "10.1/b"),
        ax("2101.00003", "Orthogonal polynomials on the circle", "10.1/c"),
        ax("2101.00004", "Bessel functions revisited", "10.2/x"),
        ax("2101.00005", "Hypergeometric sums", "10.2/y"),
        ax("2101.00006", "Completely unrelated words", "10.2/z"),  // over the negative cap
    };
    GroundTruthOptions opt;
    opt.max_negatives = 2;
    const auto gt = build_ground_truth(zbc, a, opt);
    EXPECT_EQ(gt.positives, 3u);
    EXPECT_EQ(gt.negatives, 2u);
    ASSERT_EQ(gt.pairs.size(), 5u);
    EXPECT_EQ(gt.pairs[3], (GroundTruthPair{"0001.00001", "2101.00004", false}));
    EXPECT_EQ(gt.pairs[4], (GroundTruthPair{"0001.00002", "2101.00005", false}));
}

TEST(GroundTruth, Eval20FixtureIsReproducible) {
    const auto f = zt::load_eval20();
    const ZbCatalog zbc(f.zb);
    const auto gt = build_ground_truth(zbc, f.arxiv);
    EXPECT_EQ(gt.pairs, f.pairs);
    EXPECT_EQ(gt.positives, 18u);
    EXPECT_EQ(gt.negatives, 2u);
}

TEST(Split, SizesDeterminismAndLabels) {
    const auto pairs = mixed_pairs(10, 3);
    const auto a = split_ground_truth(pairs, 0.8, 42);
    EXPECT_EQ(a.train.size(), 8u);
    EXPECT_EQ(a.test.size(), 2u);
    EXPECT_FALSE(a.single_class);
    const auto b = split_ground_truth(pairs, 0.8, 42);
    EXPECT_EQ(a.train, b.train);
    EXPECT_EQ(a.test, b.test);
    EXPECT_EQ(a.seed_used, b.seed_used);
    for (const auto* part : {&a.train, &a.test}) {
        EXPECT_TRUE(std::any_of(part->begin(), part->end(), [](auto& p) { return p.label; }));
        EXPECT_TRUE(std::any_of(part->begin(), part->end(), [](auto& p) { return !p.label; }));
    }
    // partition of the input
    auto all = a.train;
    all.insert(all.end(), a.test.begin(), a.test.end());
    auto sorted_in = pairs;
    auto key = [](const GroundTruthPair& x, const GroundTruthPair& y) { return x.zbl_id < y.zbl_id; };
    std::sort(all.begin(), all.end(), key);
    std::sort(sorted_in.begin(), sorted_in.end(), key);
    EXPECT_EQ(all, sorted_in);
}

TEST(Split, SingleClassAndDegenerate) {
    const auto positives = mixed_pairs(10, 0);
    const auto s = split_ground_truth(positives);
    EXPECT_TRUE(s.single_class);
    EXPECT_FALSE(s.train.empty());
    EXPECT_FALSE(s.test.empty());

    try {
        split_ground_truth(mixed_pairs(3, 1));  // one test slot cannot hold both labels
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DegenerateSplit);
    }
    EXPECT_THROW(split_ground_truth(mixed_pairs(1, 0)), Error);
    EXPECT_THROW(split_ground_truth(mixed_pairs(10, 3), 1.0), Error);
}

TEST(Evaluate, SmallExamples) {
    const auto f = zt::load_eval20();
    const ZbCatalog zbc(f.zb);
    const ArxivCatalog axc(f.arxiv);
    std::vector<GroundTruthPair> three(f.pairs.begin(), f.pairs.begin() + 3);
    auto r = evaluate(three, zbc, axc, f.tree);
    EXPECT_EQ(r.precision, 1.0);
    EXPECT_EQ(r.recall, 1.0);

    three.push_back(f.pairs[15]);  // preprint with an unrelated title: not found
    r = evaluate(three, zbc, axc, f.tree);
    EXPECT_EQ(r.precision, 1.0);
    EXPECT_EQ(r.recall, 0.75);

    const auto empty = evaluate({}, zbc, axc, f.tree);
    EXPECT_EQ(empty, EvalReport::from_counts(0, 0, 0));
}

TEST(Evaluate, Eval20ConfusionCounts) {
    const auto f = zt::load_eval20();
    const ZbCatalog zbc(f.zb);
    const ArxivCatalog axc(f.arxiv);
    const auto r = evaluate(f.pairs, zbc, axc, f.tree);
    EXPECT_EQ(r.true_positives, 15u);
    EXPECT_EQ(r.false_positives, 2u);
    EXPECT_EQ(r.false_negatives, 3u);
    EXPECT_NEAR(r.precision, 15.0 / 17.0, 1e-12);
    EXPECT_NEAR(r.recall, 15.0 / 18.0, 1e-12);
}

TEST(TrainingSamples, PairVectorsAndHardNegatives) {
    const auto f = zt::load_eval20();
    const ZbCatalog zbc(f.zb);
    const ArxivCatalog axc(f.arxiv);
    const std::vector<GroundTruthPair> one = {f.pairs[0]};
    const auto s = training_samples(one, zbc, axc, 3);
    ASSERT_FALSE(s.empty());
    EXPECT_TRUE(s[0].label);
    EXPECT_EQ(s[0].features, extract_features(*zbc.find(f.pairs[0].zbl_id), *axc.find(f.pairs[0].arxiv_id)));
    for (std::size_t i = 1; i < s.size(); ++i) EXPECT_FALSE(s[i].label);
    EXPECT_LE(s.size(), 3u);

    const std::vector<GroundTruthPair> neg = {f.pairs[18]};
    const auto n = training_samples(neg, zbc, axc, 3);
    ASSERT_EQ(n.size(), 1u);
    EXPECT_FALSE(n[0].label);

    const std::vector<GroundTruthPair> bad = {{"9999.99999", "2001.00000", true}};
    EXPECT_THROW(training_samples(bad, zbc, axc), Error);
}

TEST(Pipeline, SmallSyntheticCorpusTrainsAUsefulTree) {
    const auto c = zt::make_corpus({.zb_records = 200, .derived = 160, .distractors = 40, .seed = 9});
    const ZbCatalog zbc(c.zb);
    const ArxivCatalog axc(c.arxiv);
    const auto gt = build_ground_truth(zbc, c.arxiv);
    const auto split = split_ground_truth(gt.pairs);
    const auto tree = train_tree(training_samples(split.train, zbc, axc));
    const auto r = evaluate(split.test, zbc, axc, tree);
    EXPECT_GE(r.precision, 0.8);
    EXPECT_GE(r.recall, 0.8);
}
