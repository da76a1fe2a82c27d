#include "zblinks/features.hpp"

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "zblinks/text.hpp"

namespace zblinks {

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<std::size_t> prev(b.size() + 1, 0);
    std::vector<std::size_t> cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double title_dissimilarity(std::string_view a, std::string_view b) {
    const auto ta = tokenize(a);
    const auto tb = tokenize(b);
    const std::size_t total = ta.size() + tb.size();
    if (total == 0) return 0.0;
    const double sim = 2.0 * static_cast<double>(lcs_length(ta, tb)) / static_cast<double>(total);
    return std::clamp(1.0 - sim, 0.0, 1.0);
}

double author_dissimilarity(std::span<const std::string> a, std::span<const std::string> b) {
    auto ka = author_keys(a);
    auto kb = author_keys(b);
    std::sort(ka.begin(), ka.end());
    ka.erase(std::unique(ka.begin(), ka.end()), ka.end());
    std::sort(kb.begin(), kb.end());
    kb.erase(std::unique(kb.begin(), kb.end()), kb.end());
    if (ka.empty() && kb.empty()) return 0.0;
    std::vector<std::string> common;
    std::set_intersection(ka.begin(), ka.end(), kb.begin(), kb.end(), std::back_inserter(common));
    const std::size_t unions = ka.size() + kb.size() - common.size();
    return 1.0 - static_cast<double>(common.size()) / static_cast<double>(unions);
}

double year_dissimilarity(int a, int b) {
    return static_cast<double>(std::min(std::abs(a - b), kYearCap)) / kYearCap;
}

FeatureVector extract_features(const ZbRecord& zb, const ArxivRecord& cand) {
    return {title_dissimilarity(zb.title(), cand.title()),
            author_dissimilarity(zb.authors(), cand.authors()),
            year_dissimilarity(zb.year(), cand.year())};
}

}  // namespace zblinks
