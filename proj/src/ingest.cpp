#include "zblinks/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <set>
#include <unordered_set>

#include "zblinks/serialize.hpp"

namespace zblinks {

namespace {

std::string_view trim(std::string_view s) {
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool starts_with_icase(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i]) return false;
    }
    return true;
}

// Rewrites a raw "doi" field into canonical form, or rejects the line.
void canonicalize_doi_field(Json& obj) {
    auto it = obj.find("doi");
    if (it == obj.end() || it->is_null()) return;
    if (!it->is_string()) throw Error(Errc::InvalidValue, "field 'doi' must be a string");
    const auto raw = it->get<std::string>();
    if (trim(raw).empty()) {
        *it = nullptr;
        return;
    }
    auto doi = normalize_doi(raw);
    if (!doi) throw Error(Errc::InvalidValue, "unparseable DOI '" + raw + "'");
    *it = *doi;
}

// Drives a line-oriented parse. `decode` turns one JSON object into an item
// or throws; `admit` rejects items that conflict with earlier ones.
template <typename T, typename Decode, typename Admit>
ParseResult<T> parse_lines(std::istream& in, ParseOptions options, Decode decode, Admit admit) {
    ParseResult<T> result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        LineError err{line_no, Errc::MalformedLine, {}};
        try {
            Json obj = Json::parse(line);
            if (!obj.is_object()) throw Error(Errc::InvalidValue, "line is not a JSON object");
            T item = decode(obj);
            if (auto conflict = admit(item)) {
                err.code = conflict->first;
                err.reason = conflict->second;
            } else {
                result.items.push_back(std::move(item));
                continue;
            }
        } catch (const Json::exception& e) {
            err.reason = std::string("invalid JSON: ") + e.what();
        } catch (const Error& e) {
            err.reason = e.what();
        }
        if (options.strict) {
            throw Error(err.code, "line " + std::to_string(err.line) + ": " + err.reason);
        }
        result.errors.push_back(std::move(err));
    }
    return result;
}

using Conflict = std::optional<std::pair<Errc, std::string>>;

}  // namespace

std::optional<std::string> normalize_doi(std::string_view raw) {
    std::string_view s = trim(raw);
    for (std::string_view prefix : {"https://doi.org/", "http://doi.org/", "doi:"}) {
        if (starts_with_icase(s, prefix)) {
            s.remove_prefix(prefix.size());
            break;
        }
    }
    s = trim(s);
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (out.rfind("10.", 0) != 0) return std::nullopt;
    return out;
}

ParseResult<ZbRecord> parse_zb_snapshot(std::istream& in, ParseOptions options) {
    std::unordered_set<std::string> seen;
    return parse_lines<ZbRecord>(
        in, options,
        [](Json& obj) {
            canonicalize_doi_field(obj);
            return obj.get<ZbRecord>();
        },
        [&](const ZbRecord& r) -> Conflict {
            if (!seen.insert(r.zbl_id()).second) {
                return std::pair{Errc::MalformedLine, "duplicate zbl_id " + r.zbl_id()};
            }
            return std::nullopt;
        });
}

ParseResult<ArxivRecord> parse_arxiv_snapshot(std::istream& in, ParseOptions options) {
    std::unordered_set<std::string> seen;
    return parse_lines<ArxivRecord>(
        in, options,
        [](Json& obj) {
            canonicalize_doi_field(obj);
            return obj.get<ArxivRecord>();
        },
        [&](const ArxivRecord& r) -> Conflict {
            if (!seen.insert(r.arxiv_id()).second) {
                return std::pair{Errc::MalformedLine, "duplicate arxiv_id " + r.arxiv_id()};
            }
            return std::nullopt;
        });
}

ParseResult<Link> parse_dlmf_links(std::istream& in, ParseOptions options) {
    std::set<LinkKey> seen;
    return parse_lines<Link>(
        in, options, [](Json& obj) { return obj.get<Link>(); },
        [&](const Link& l) -> Conflict {
            if (!seen.insert(l.key()).second) {
                return std::pair{Errc::DuplicateLink, "duplicate link " + l.partner() + " " +
                                                          l.source_id() + " -> " + l.target_zbl()};
            }
            return std::nullopt;
        });
}

Partner dlmf_partner() {
    return Partner({.name = "DLMF",
                    .display_name = "NIST Digital Library of Mathematical Functions",
                    .base_url_template = "https://dlmf.nist.gov/{id}",
                    .id_scheme = "dlmf-anchor"});
}

SnapshotManifest SnapshotManifest::load(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw Error(Errc::Io, "cannot open manifest " + manifest_path.string());
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::exception& e) {
        throw Error(Errc::Format, "manifest is not valid JSON: " + std::string(e.what()));
    }
    const auto base = manifest_path.parent_path();
    auto resolve = [&](const std::string& p) -> std::filesystem::path {
        std::filesystem::path path(p);
        if (path.is_relative()) path = base / path;
        if (!std::filesystem::exists(path)) throw Error(Errc::Io, "snapshot file not found: " + path.string());
        return path;
    };

    SnapshotManifest m;
    m.zb_records_path = resolve(require_string(doc, "zb_records"));
    if (auto p = optional_string(doc, "arxiv_records")) m.arxiv_records_path = resolve(*p);
    if (auto p = optional_string(doc, "dlmf_links")) m.dlmf_links_path = resolve(*p);
    m.created = optional_string(doc, "created").value_or("");
    if (auto it = doc.find("partners"); it != doc.end() && it->is_array()) {
        for (const auto& p : *it) m.partners.push_back(p.get<Partner>());
    } else {
        m.partners.push_back(dlmf_partner());
    }
    return m;
}

Snapshot load_snapshot(const SnapshotManifest& manifest, ParseOptions options) {
    Snapshot snap;
    snap.partners = manifest.partners;
    auto open = [](const std::filesystem::path& p) {
        std::ifstream in(p);
        if (!in) throw Error(Errc::Io, "cannot open " + p.string());
        return in;
    };
    auto collect = [&](const std::filesystem::path& p, auto& result, auto& dest) {
        for (auto& e : result.errors) snap.errors.emplace_back(p.filename().string(), std::move(e));
        dest = std::move(result.items);
    };

    {
        auto in = open(manifest.zb_records_path);
        auto r = parse_zb_snapshot(in, options);
        collect(manifest.zb_records_path, r, snap.zb_records);
    }
    if (manifest.arxiv_records_path) {
        auto in = open(*manifest.arxiv_records_path);
        auto r = parse_arxiv_snapshot(in, options);
        collect(*manifest.arxiv_records_path, r, snap.arxiv_records);
    }
    if (manifest.dlmf_links_path) {
        auto in = open(*manifest.dlmf_links_path);
        auto r = parse_dlmf_links(in, options);
        collect(*manifest.dlmf_links_path, r, snap.links);
    }
    return snap;
}

}  // namespace zblinks
