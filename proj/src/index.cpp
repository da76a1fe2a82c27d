#include "zblinks/index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_set>

#include "zblinks/error.hpp"
#include "zblinks/text.hpp"

namespace zblinks {

namespace {

constexpr std::string_view kMagic = "zblinks-text-index";
constexpr int kFormatVersion = 1;

bool ranks_before(const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.record_id < b.record_id;
}

}  // namespace

std::vector<std::string> query_tokens(std::string_view title, std::span<const std::string> authors) {
    std::vector<std::string> tokens = tokenize(title);
    for (const auto& a : authors) {
        auto more = tokenize(a);
        tokens.insert(tokens.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    }
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    return tokens;
}

TextIndex TextIndex::build(std::span<const IndexDocument> docs, Bm25Params params) {
    TextIndex index;
    index.params_ = params;
    index.ids_.reserve(docs.size());
    index.doc_lengths_.reserve(docs.size());
    std::unordered_set<std::string> seen;
    std::uint64_t total_length = 0;

    for (std::size_t ordinal = 0; ordinal < docs.size(); ++ordinal) {
        const auto& doc = docs[ordinal];
        if (!seen.insert(doc.id).second) throw Error(Errc::DuplicateId, "duplicate record id " + doc.id);

        std::vector<std::string> tokens = tokenize(doc.title);
        for (const auto& a : doc.authors) {
            auto more = tokenize(a);
            tokens.insert(tokens.end(), more.begin(), more.end());
        }
        std::map<std::string, std::uint32_t> tf;
        for (const auto& t : tokens) ++tf[t];
        const auto ord = static_cast<std::uint32_t>(ordinal);
        for (const auto& [token, count] : tf) index.postings_[token].push_back({ord, count});

        index.ids_.push_back(doc.id);
        index.doc_lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
        total_length += tokens.size();
    }
    index.avg_doc_length_ =
        docs.empty() ? 0.0 : static_cast<double>(total_length) / static_cast<double>(docs.size());
    return index;
}

std::span<const Posting> TextIndex::postings(const std::string& token) const {
    auto it = postings_.find(token);
    if (it == postings_.end()) return {};
    return it->second;
}

std::vector<Candidate> TextIndex::query(std::string_view title, std::span<const std::string> authors,
                                        std::size_t k) const {
    if (k == 0 || ids_.empty() || avg_doc_length_ <= 0.0) return {};
    const double n = static_cast<double>(ids_.size());
    const double k1 = params_.k1;
    const double b = params_.b;

    // Tokens are visited in sorted order so each document's score is summed
    // in a fixed order.
    std::unordered_map<std::uint32_t, double> scores;
    for (const auto& token : query_tokens(title, authors)) {
        auto it = postings_.find(token);
        if (it == postings_.end()) continue;
        const double df = static_cast<double>(it->second.size());
        const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        for (const Posting& p : it->second) {
            const double tf = p.tf;
            const double dl = doc_lengths_[p.doc];
            const double norm = k1 * (1.0 - b + b * dl / avg_doc_length_);
            scores[p.doc] += idf * (tf * (k1 + 1.0)) / (tf + norm);
        }
    }

    std::vector<Candidate> ranked;
    ranked.reserve(scores.size());
    for (const auto& [doc, score] : scores) {
        if (score > 0.0) ranked.push_back({ids_[doc], score});
    }
    const std::size_t keep = std::min(k, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(),
                      ranks_before);
    ranked.resize(keep);
    return ranked;
}

std::vector<std::string> TextIndex::audit() const {
    std::vector<std::string> problems;
    if (doc_lengths_.size() != ids_.size()) problems.emplace_back("doc_lengths size differs from id map");
    std::uint64_t total = 0;
    for (auto len : doc_lengths_) total += len;
    const double mean = ids_.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(ids_.size());
    if (std::abs(mean - avg_doc_length_) > 1e-9 * std::max(1.0, std::abs(mean))) {
        problems.emplace_back("avg_doc_length is not the mean of doc_lengths");
    }
    for (const auto& [token, list] : postings_) {
        for (const auto& p : list) {
            if (p.doc >= ids_.size()) problems.push_back("posting for '" + token + "' out of range");
        }
    }
    return problems;
}

nlohmann::json TextIndex::to_json() const {
    // Tokens sorted so the serialized form is byte-stable.
    std::map<std::string, const std::vector<Posting>*> sorted;
    for (const auto& [token, list] : postings_) sorted.emplace(token, &list);
    nlohmann::json postings = nlohmann::json::object();
    for (const auto& [token, list] : sorted) {
        auto arr = nlohmann::json::array();
        for (const auto& p : *list) arr.push_back({p.doc, p.tf});
        postings[token] = std::move(arr);
    }
    return {{"magic", kMagic},
            {"version", kFormatVersion},
            {"params", {{"k1", params_.k1}, {"b", params_.b}}},
            {"ids", ids_},
            {"doc_lengths", doc_lengths_},
            {"avg_doc_length", avg_doc_length_},
            {"postings", std::move(postings)}};
}

TextIndex TextIndex::from_json(const nlohmann::json& doc) {
    try {
        if (doc.value("magic", "") != kMagic) throw Error(Errc::Format, "not a text index file");
        if (doc.at("version").get<int>() != kFormatVersion) {
            throw Error(Errc::Format, "unsupported text index version");
        }
        TextIndex index;
        index.params_ = {doc.at("params").at("k1").get<double>(), doc.at("params").at("b").get<double>()};
        index.ids_ = doc.at("ids").get<std::vector<std::string>>();
        index.doc_lengths_ = doc.at("doc_lengths").get<std::vector<std::uint32_t>>();
        index.avg_doc_length_ = doc.at("avg_doc_length").get<double>();
        for (const auto& [token, arr] : doc.at("postings").items()) {
            auto& list = index.postings_[token];
            for (const auto& p : arr) list.push_back({p.at(0).get<std::uint32_t>(), p.at(1).get<std::uint32_t>()});
        }
        if (auto problems = index.audit(); !problems.empty()) throw Error(Errc::Format, problems.front());
        return index;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::Format, std::string("malformed text index: ") + e.what());
    }
}

void TextIndex::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw Error(Errc::Io, "cannot write " + path.string());
    out << to_json().dump() << '\n';
    if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

TextIndex TextIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open " + path.string());
    try {
        return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::Format, std::string("malformed text index: ") + e.what());
    }
}

}  // namespace zblinks
