#include "zblinks/kernels.hpp"

#include <exception>

#include <omp.h>

namespace zblinks {

namespace {
int g_threads = 0;
}

void set_match_threads(int threads) { g_threads = threads; }

std::vector<const ZbRecord*> record_pointers(std::span<const ZbRecord> records) {
    std::vector<const ZbRecord*> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(&r);
    return out;
}

std::vector<MatchResult> match_all(std::span<const ZbRecord* const> records, const ArxivCatalog& arxiv,
                                   const DecisionTree& tree, std::size_t k) {
    std::vector<MatchResult> results(records.size());
    const auto n = static_cast<std::ptrdiff_t>(records.size());
    const int threads = g_threads > 0 ? g_threads : omp_get_max_threads();
    std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            results[static_cast<std::size_t>(i)] = match_record(*records[static_cast<std::size_t>(i)], arxiv, tree, k);
        } catch (...) {
#pragma omp critical(zblinks_match_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

std::vector<MatchResult> match_all_serial(std::span<const ZbRecord* const> records, const ArxivCatalog& arxiv,
                                          const DecisionTree& tree, std::size_t k) {
    std::vector<MatchResult> results;
    results.reserve(records.size());
    for (const ZbRecord* r : records) results.push_back(match_record(*r, arxiv, tree, k));
    return results;
}

}  // namespace zblinks
