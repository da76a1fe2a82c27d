#pragma once

// Synthetic bibliographic corpora and random store contents for tests and
// the benchmark. Everything is a pure function of the seed.

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "zblinks/linksdb.hpp"
#include "zblinks/model.hpp"
#include "zblinks/xfield.hpp"

namespace zblinks::testing {

struct SynthParams {
    std::size_t zb_records = 1000;
    std::size_t derived = 800;        // arXiv versions of the first `derived` zb records
    std::size_t distractors = 200;    // unrelated preprints sharing an author with some record
    double token_drop = 0.1;
    double author_initial = 0.3;      // rewrite "Family, Given" as "G. Family"
    double year_shift = 0.2;          // year +-1
    double distractor_doi = 0.5;      // share of distractors carrying a DOI unknown to zbMATH
    std::size_t vocabulary = 4000;
    std::uint64_t seed = 1;
};

struct SynthCorpus {
    std::vector<ZbRecord> zb;
    std::vector<ArxivRecord> arxiv;
    std::map<std::string, std::string> truth;  // arxiv_id -> zbl_id for derived preprints
};

SynthCorpus make_corpus(const SynthParams& params);

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::mt19937_64& rng() { return rng_; }
    std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    int between(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
    double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }

    std::string word(std::size_t min_syllables = 1, std::size_t max_syllables = 3);
    std::string zbl_id();
    std::string msc_code();
    Date date(int lo_year, int hi_year);
    // Short text with some non-ASCII and markup, for titles and anchors.
    std::string text(std::size_t words);

    template <typename T>
    const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

private:
    std::mt19937_64 rng_;
};

// Small random store: 1-3 partners, some records, some links.
struct StoreSpec {
    std::size_t max_partners = 3;
    std::size_t max_records = 8;
    std::size_t max_links = 20;
};

struct StoreContents {
    std::vector<Partner> partners;
    std::vector<ZbRecord> records;
    std::vector<Link> links;
};

StoreContents random_store_contents(Gen& gen, const StoreSpec& spec = {});
void fill_store(LinkStore& store, const StoreContents& contents);

// Nested objects/arrays/scalars over a small key alphabet, so random
// projections hit existing keys often.
nlohmann::json random_json(Gen& gen, int depth);
// Names unique per level, drawn from the same alphabet.
Projection random_projection(Gen& gen, int depth);

}  // namespace zblinks::testing
