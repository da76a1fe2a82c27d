#pragma once

// Partner/link/record store behind the API. Many concurrent readers, one
// writer at a time; every query sees the state as of its start.
//
// A persistent store lives in a directory holding a compacted snapshot and an
// append-only journal, both newline-delimited JSON with a versioned header
// line. A mutation is acknowledged only after its journal line is flushed.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "zblinks/model.hpp"

namespace zblinks {

class JournalWriter;

inline constexpr std::size_t kDefaultPageLimit = 100;

struct LinkFilter {
    std::optional<std::string> author;   // folded-token containment
    std::optional<std::string> msc;      // 2 chars: primary area; 5 chars: any code
    std::optional<std::string> partner;
};

struct PageRequest {
    std::size_t offset = 0;
    std::size_t limit = kDefaultPageLimit;  // must be >= 1
};

struct SourceCount {
    std::string source_id;
    std::size_t count = 0;

    bool operator==(const SourceCount&) const = default;
};

struct CitationCount {
    std::string zbl_id;
    std::size_t count = 0;

    bool operator==(const CitationCount&) const = default;
};

// A link together with the objects it refers to, read under one lock.
struct ResolvedLink {
    Link link;
    ZbRecord record;
    Partner partner;
};

enum class Durability {
    Fsync,  // fsync after every journal append
    Flush,  // write(2) only; survives process death, not power loss
};

class LinkStore {
public:
    // In-memory store without persistence.
    LinkStore();
    // Opens (or creates) a persistent store in `dir`, replaying snapshot and
    // journal. A torn final journal line is discarded.
    explicit LinkStore(const std::filesystem::path& dir, Durability durability = Durability::Fsync);
    ~LinkStore();

    LinkStore(const LinkStore&) = delete;
    LinkStore& operator=(const LinkStore&) = delete;

    // Mutations. Errors: PartnerExists, UnknownPartner, UnknownZbl, DuplicateLink.
    void register_partner(const Partner& partner);
    void update_partner(const std::string& name, const Partner& partner);
    void put_record(const ZbRecord& record);  // insert or replace
    void add_link(const Link& link);

    std::vector<Partner> list_partners() const;
    std::optional<Partner> partner(const std::string& name) const;
    std::optional<ZbRecord> record(const std::string& zbl_id) const;
    std::vector<ZbRecord> records() const;
    std::size_t record_count() const;
    std::size_t link_count() const;

    // Ordered by (partner, source_id, target_zbl). Errors: BadFilter.
    std::vector<Link> get_links(const LinkFilter& filter, PageRequest page = {}) const;
    std::vector<ResolvedLink> resolve_links(const LinkFilter& filter, PageRequest page = {}) const;
    std::size_t count_links(const LinkFilter& filter) const;

    std::optional<Link> get_link_item(const std::string& source_id, const std::string& zbl,
                                      const std::string& partner) const;
    std::optional<ResolvedLink> resolve_link_item(const std::string& source_id, const std::string& zbl,
                                                  const std::string& partner) const;

    std::vector<SourceCount> list_sources(const std::optional<std::string>& partner = std::nullopt) const;

    // Distinct referenced records per primary 2-digit MSC area / per year.
    std::map<std::string, std::size_t> msc_stats(const std::optional<std::string>& partner = std::nullopt) const;
    std::map<int, std::size_t> year_stats(const std::optional<std::string>& partner = std::nullopt) const;
    // Link instances per target, >= min_count, descending count then zbl_id.
    std::vector<CitationCount> citation_counts(const std::optional<std::string>& partner = std::nullopt,
                                               std::size_t min_count = 1) const;
    // Cumulative links dated on or before Dec 31 of each year.
    std::map<int, std::size_t> link_growth(const std::optional<std::string>& partner = std::nullopt) const;

    // Referential integrity and secondary-index consistency; empty when sound.
    std::vector<std::string> audit() const;

    bool persistent() const noexcept { return journal_ != nullptr; }
    std::uint64_t sequence() const;

    // Rewrites the snapshot from current state and starts an empty journal.
    void compact();
    // Writes a fresh persistent store (snapshot + empty journal) into `dir`.
    void save(const std::filesystem::path& dir) const;

    struct State;

private:
    void replay(const std::filesystem::path& dir);
    void append_journal(const std::string& line);

    mutable std::shared_mutex mutex_;
    std::unique_ptr<State> state_;
    std::filesystem::path dir_;
    std::unique_ptr<JournalWriter> journal_;
    Durability durability_ = Durability::Fsync;
};

inline constexpr const char* kSnapshotFile = "store.snapshot";
inline constexpr const char* kJournalFile = "store.journal";

}  // namespace zblinks
