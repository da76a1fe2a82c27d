#include "zblinks/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_set>

#include "zblinks/error.hpp"
#include "zblinks/features.hpp"
#include "zblinks/kernels.hpp"

namespace zblinks {

namespace {

template <typename Record>
std::vector<IndexDocument> documents_of(std::span<const Record> records) {
    std::vector<IndexDocument> docs;
    docs.reserve(records.size());
    for (const auto& r : records) docs.push_back({record_id(r), r.title(), r.authors()});
    return docs;
}

// Uniform integer in [0, bound) by rejection, so the stream of draws is fully
// determined by the mt19937_64 sequence.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = 0;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

template <typename T>
void seeded_shuffle(std::vector<T>& items, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(draw_below(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

bool has_label(std::span<const GroundTruthPair> pairs, bool label) {
    return std::any_of(pairs.begin(), pairs.end(), [&](const auto& p) { return p.label == label; });
}

}  // namespace

std::vector<IndexDocument> index_documents(std::span<const ArxivRecord> records) { return documents_of(records); }
std::vector<IndexDocument> index_documents(std::span<const ZbRecord> records) { return documents_of(records); }

template <typename Record>
Catalog<Record>::Catalog(std::vector<Record> records, Bm25Params params) : records_(std::move(records)) {
    index_ = TextIndex::build(index_documents(std::span<const Record>(records_)), params);
    for (std::size_t i = 0; i < records_.size(); ++i) by_id_.emplace(record_id(records_[i]), i);
}

template <typename Record>
Catalog<Record>::Catalog(std::vector<Record> records, TextIndex index)
    : records_(std::move(records)), index_(std::move(index)) {
    if (index_.doc_count() != records_.size()) {
        throw Error(Errc::Format, "index covers " + std::to_string(index_.doc_count()) + " records, catalog has " +
                                      std::to_string(records_.size()));
    }
    for (std::size_t i = 0; i < records_.size(); ++i) {
        if (index_.id(i) != record_id(records_[i])) {
            throw Error(Errc::Format, "index does not match records at ordinal " + std::to_string(i));
        }
        if (!by_id_.emplace(record_id(records_[i]), i).second) {
            throw Error(Errc::DuplicateId, "duplicate record id " + record_id(records_[i]));
        }
    }
}

template <typename Record>
const Record* Catalog<Record>::find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    return it == by_id_.end() ? nullptr : &records_[it->second];
}

template class Catalog<ArxivRecord>;
template class Catalog<ZbRecord>;

std::optional<std::string> choose_smallest_norm(std::span<const ExaminedCandidate> examined) {
    const ExaminedCandidate* best = nullptr;
    double best_norm = 0.0;
    for (const auto& c : examined) {
        if (!c.verdict) continue;
        const double norm = c.features.norm();
        if (!best || norm < best_norm || (norm == best_norm && c.arxiv_id < best->arxiv_id)) {
            best = &c;
            best_norm = norm;
        }
    }
    if (!best) return std::nullopt;
    return best->arxiv_id;
}

MatchResult match_record(const ZbRecord& zb, const ArxivCatalog& arxiv, const DecisionTree& tree, std::size_t k) {
    if (k == 0) throw Error(Errc::InvalidValue, "k must be >= 1");
    MatchResult result;
    result.zbl_id = zb.zbl_id();
    for (const auto& cand : arxiv.index().query(zb.title(), zb.authors(), k)) {
        const ArxivRecord* rec = arxiv.find(cand.record_id);
        const FeatureVector fv = extract_features(zb, *rec);
        result.candidates_examined.push_back({cand.record_id, fv, tree.predict(fv)});
    }
    result.chosen_arxiv = choose_smallest_norm(result.candidates_examined);
    return result;
}

GroundTruth build_ground_truth(const ZbCatalog& zb, std::span<const ArxivRecord> arxiv, GroundTruthOptions options) {
    std::unordered_map<std::string, std::vector<const ZbRecord*>> by_doi;
    for (const auto& r : zb.records()) {
        if (r.doi()) by_doi[*r.doi()].push_back(&r);
    }

    GroundTruth gt;
    std::unordered_set<std::string> reported;
    for (const auto& a : arxiv) {
        if (!a.doi()) {
            ++gt.without_doi;
            continue;
        }
        auto it = by_doi.find(*a.doi());
        if (it != by_doi.end() && it->second.size() > 1) {
            if (reported.insert(*a.doi()).second) gt.ambiguous_dois.push_back(*a.doi());
            continue;
        }
        if (it != by_doi.end()) {
            gt.pairs.push_back({it->second.front()->zbl_id(), a.arxiv_id(), true});
            ++gt.positives;
            continue;
        }
        if (options.max_negatives && gt.negatives >= *options.max_negatives) continue;
        const auto top = zb.index().query(a.title(), a.authors(), 1);
        if (top.empty()) {
            ++gt.unmatched_without_candidate;
            continue;
        }
        gt.pairs.push_back({top.front().record_id, a.arxiv_id(), false});
        ++gt.negatives;
    }
    return gt;
}

SplitResult split_ground_truth(std::span<const GroundTruthPair> pairs, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw Error(Errc::InvalidValue, "train fraction must lie strictly between 0 and 1");
    }
    const std::size_t n = pairs.size();
    if (n < 2) throw Error(Errc::DegenerateSplit, "need at least two pairs to split");
    const auto wanted = static_cast<std::size_t>(std::llround(static_cast<double>(n) * train_fraction));
    const std::size_t train_n = std::clamp<std::size_t>(wanted, 1, n - 1);
    const bool both = has_label(pairs, true) && has_label(pairs, false);

    for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
        std::vector<GroundTruthPair> shuffled(pairs.begin(), pairs.end());
        seeded_shuffle(shuffled, seed + attempt);
        SplitResult r;
        r.seed_used = seed + attempt;
        r.single_class = !both;
        r.train.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(train_n));
        r.test.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(train_n), shuffled.end());
        if (!both) return r;
        if (has_label(r.train, true) && has_label(r.train, false) && has_label(r.test, true) &&
            has_label(r.test, false)) {
            return r;
        }
    }
    throw Error(Errc::DegenerateSplit, "no split within 100 reshuffles keeps both labels in both partitions");
}

std::vector<LabeledSample> training_samples(std::span<const GroundTruthPair> pairs, const ZbCatalog& zb,
                                            const ArxivCatalog& arxiv, std::size_t k) {
    std::vector<LabeledSample> samples;
    for (const auto& p : pairs) {
        const ZbRecord* z = zb.find(p.zbl_id);
        const ArxivRecord* a = arxiv.find(p.arxiv_id);
        if (!z) throw Error(Errc::NotFound, "ground truth references unknown zbl_id " + p.zbl_id);
        if (!a) throw Error(Errc::NotFound, "ground truth references unknown arxiv_id " + p.arxiv_id);
        samples.push_back({extract_features(*z, *a), p.label});
        if (!p.label) continue;
        for (const auto& cand : arxiv.index().query(z->title(), z->authors(), k)) {
            if (cand.record_id == p.arxiv_id) continue;
            samples.push_back({extract_features(*z, *arxiv.find(cand.record_id)), false});
        }
    }
    return samples;
}

EvalReport evaluate(std::span<const GroundTruthPair> test_pairs, const ZbCatalog& zb, const ArxivCatalog& arxiv,
                    const DecisionTree& tree, std::size_t k) {
    std::vector<const ZbRecord*> queries;
    std::unordered_map<std::string, std::size_t> slot;
    for (const auto& p : test_pairs) {
        const ZbRecord* z = zb.find(p.zbl_id);
        if (!z) throw Error(Errc::NotFound, "test pair references unknown zbl_id " + p.zbl_id);
        if (slot.emplace(p.zbl_id, queries.size()).second) queries.push_back(z);
    }
    const auto results = match_all(queries, arxiv, tree, k);

    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (const auto& p : test_pairs) {
        const auto& chosen = results[slot.at(p.zbl_id)].chosen_arxiv;
        if (p.label) {
            if (!chosen) {
                ++fn;
            } else if (*chosen == p.arxiv_id) {
                ++tp;
            } else {
                ++fp;
                ++fn;
            }
        } else if (chosen && *chosen == p.arxiv_id) {
            ++fp;
        }
    }
    return EvalReport::from_counts(tp, fp, fn);
}

}  // namespace zblinks
