#pragma once

// Inverted index with BM25 ranking; the candidate-generation step of the
// matcher. Immutable after build, so concurrent queries are safe.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace zblinks {

struct IndexDocument {
    std::string id;
    std::string title;
    std::vector<std::string> authors;
};

struct Posting {
    std::uint32_t doc = 0;
    std::uint32_t tf = 0;

    bool operator==(const Posting&) const = default;
};

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;

    bool operator==(const Bm25Params&) const = default;
};

struct Candidate {
    std::string record_id;
    double score = 0.0;

    bool operator==(const Candidate&) const = default;
};

inline constexpr std::size_t kDefaultCandidates = 3;

class TextIndex {
public:
    TextIndex() = default;

    // Indexes title tokens followed by author tokens. Throws Errc::DuplicateId.
    static TextIndex build(std::span<const IndexDocument> docs, Bm25Params params = {});

    // Top-k by BM25 over the distinct tokens of title and authors; descending
    // score, ties by ascending record id. Records with zero score are never
    // returned.
    std::vector<Candidate> query(std::string_view title, std::span<const std::string> authors,
                                 std::size_t k = kDefaultCandidates) const;

    std::size_t doc_count() const noexcept { return ids_.size(); }
    double avg_doc_length() const noexcept { return avg_doc_length_; }
    const Bm25Params& params() const noexcept { return params_; }
    std::uint32_t doc_length(std::size_t ordinal) const { return doc_lengths_.at(ordinal); }
    const std::string& id(std::size_t ordinal) const { return ids_.at(ordinal); }
    std::span<const Posting> postings(const std::string& token) const;
    std::size_t vocabulary_size() const noexcept { return postings_.size(); }

    // Structural invariants; empty when consistent.
    std::vector<std::string> audit() const;

    nlohmann::json to_json() const;
    static TextIndex from_json(const nlohmann::json& doc);  // throws Errc::Format
    void save(const std::filesystem::path& path) const;
    static TextIndex load(const std::filesystem::path& path);

    bool operator==(const TextIndex&) const = default;

private:
    Bm25Params params_;
    std::unordered_map<std::string, std::vector<Posting>> postings_;
    std::vector<std::uint32_t> doc_lengths_;
    std::vector<std::string> ids_;
    double avg_doc_length_ = 0.0;
};

// Query token set: distinct tokens of the title and author strings, sorted.
std::vector<std::string> query_tokens(std::string_view title, std::span<const std::string> authors);

}  // namespace zblinks
