#pragma once

// Offline snapshot parsing. Every snapshot part is newline-delimited JSON, one
// object per line; unknown fields are ignored.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zblinks/error.hpp"
#include "zblinks/model.hpp"

namespace zblinks {

struct LineError {
    std::size_t line = 0;  // 1-based
    Errc code = Errc::MalformedLine;
    std::string reason;
};

template <typename T>
struct ParseResult {
    std::vector<T> items;
    std::vector<LineError> errors;
};

struct ParseOptions {
    bool strict = false;  // abort on the first bad line
};

ParseResult<ZbRecord> parse_zb_snapshot(std::istream& in, ParseOptions options = {});
ParseResult<ArxivRecord> parse_arxiv_snapshot(std::istream& in, ParseOptions options = {});
ParseResult<Link> parse_dlmf_links(std::istream& in, ParseOptions options = {});

// Canonical DOI: resolver prefix and "doi:" stripped, trimmed, lowercased.
// Absent when the remainder does not start with "10.".
std::optional<std::string> normalize_doi(std::string_view raw);

// The partner whose anchors make up the bundled link data.
Partner dlmf_partner();

struct SnapshotManifest {
    std::filesystem::path zb_records_path;
    std::optional<std::filesystem::path> arxiv_records_path;
    std::optional<std::filesystem::path> dlmf_links_path;
    std::string created;  // ISO-8601 timestamp, informational
    std::vector<Partner> partners;  // defaults to {dlmf_partner()}

    // Relative paths are resolved against the manifest's directory.
    static SnapshotManifest load(const std::filesystem::path& manifest_path);
};

struct Snapshot {
    std::vector<Partner> partners;
    std::vector<ZbRecord> zb_records;
    std::vector<ArxivRecord> arxiv_records;
    std::vector<Link> links;
    std::vector<std::pair<std::string, LineError>> errors;  // (file, error)
};

Snapshot load_snapshot(const SnapshotManifest& manifest, ParseOptions options = {});

}  // namespace zblinks
