#pragma once

// arXiv <-> zbMATH entity matching: ground truth from DOI equality, feature
// extraction over BM25 candidates, a decision-tree verdict per candidate, and
// smallest-norm selection among accepted candidates.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "zblinks/index.hpp"
#include "zblinks/model.hpp"
#include "zblinks/tree.hpp"

namespace zblinks {

inline const std::string& record_id(const ZbRecord& r) { return r.zbl_id(); }
inline const std::string& record_id(const ArxivRecord& r) { return r.arxiv_id(); }

// Records plus a title+author index over them, looked up by id.
template <typename Record>
class Catalog {
public:
    explicit Catalog(std::vector<Record> records, Bm25Params params = {});
    // Reuses a prebuilt index; its id map must list exactly these records in order.
    Catalog(std::vector<Record> records, TextIndex index);

    const TextIndex& index() const noexcept { return index_; }
    std::span<const Record> records() const noexcept { return records_; }
    const Record* find(std::string_view id) const;
    std::size_t size() const noexcept { return records_.size(); }

private:
    std::vector<Record> records_;
    std::unordered_map<std::string, std::size_t> by_id_;
    TextIndex index_;
};

using ArxivCatalog = Catalog<ArxivRecord>;
using ZbCatalog = Catalog<ZbRecord>;

std::vector<IndexDocument> index_documents(std::span<const ArxivRecord> records);
std::vector<IndexDocument> index_documents(std::span<const ZbRecord> records);

struct ExaminedCandidate {
    std::string arxiv_id;
    FeatureVector features;
    bool verdict = false;

    bool operator==(const ExaminedCandidate&) const = default;
};

struct MatchResult {
    std::string zbl_id;
    std::optional<std::string> chosen_arxiv;
    std::vector<ExaminedCandidate> candidates_examined;

    bool operator==(const MatchResult&) const = default;
};

// Among accepted candidates, the smallest Euclidean norm wins; ties go to the
// lexicographically smaller arXiv id.
std::optional<std::string> choose_smallest_norm(std::span<const ExaminedCandidate> examined);

MatchResult match_record(const ZbRecord& zb, const ArxivCatalog& arxiv, const DecisionTree& tree,
                         std::size_t k = kDefaultCandidates);

struct GroundTruthOptions {
    std::optional<std::size_t> max_negatives;  // all unmatched-DOI preprints when unset
};

struct GroundTruth {
    std::vector<GroundTruthPair> pairs;  // arXiv input order
    std::vector<std::string> ambiguous_dois;
    std::size_t positives = 0;
    std::size_t negatives = 0;
    std::size_t without_doi = 0;
    std::size_t unmatched_without_candidate = 0;
};

// Positive pair when exactly one zbMATH record shares the preprint's DOI.
// Preprints whose DOI matches no record become negatives paired with their
// top BM25 candidate in `zb`. DOIs shared by several zbMATH records are
// reported and their preprints excluded.
GroundTruth build_ground_truth(const ZbCatalog& zb, std::span<const ArxivRecord> arxiv,
                               GroundTruthOptions options = {});

struct SplitResult {
    std::vector<GroundTruthPair> train;
    std::vector<GroundTruthPair> test;
    std::uint64_t seed_used = 0;
    bool single_class = false;  // input had only one label; only non-emptiness enforced
};

inline constexpr double kDefaultTrainFraction = 0.8;
inline constexpr std::uint64_t kDefaultSeed = 42;

// Seeded shuffle then prefix split. When the input holds both labels, both
// partitions must too; the shuffle is retried with seed+1 up to 100 times
// before Errc::DegenerateSplit.
SplitResult split_ground_truth(std::span<const GroundTruthPair> pairs, double train_fraction = kDefaultTrainFraction,
                               std::uint64_t seed = kDefaultSeed);

// Feature/label samples for tree training. Each pair contributes its own
// vector; a positive pair also contributes its other top-k candidates as
// negatives.
std::vector<LabeledSample> training_samples(std::span<const GroundTruthPair> pairs, const ZbCatalog& zb,
                                            const ArxivCatalog& arxiv, std::size_t k = kDefaultCandidates);

// Positives: chosen == expected is tp; another choice is fp and fn; no choice
// is fn. Negatives (z, x): choosing x is fp, anything else a true rejection.
EvalReport evaluate(std::span<const GroundTruthPair> test_pairs, const ZbCatalog& zb, const ArxivCatalog& arxiv,
                    const DecisionTree& tree, std::size_t k = kDefaultCandidates);

}  // namespace zblinks
