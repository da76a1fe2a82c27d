#include "zblinks/linksdb.hpp"

#include <algorithm>
#include <mutex>

#include "zblinks/error.hpp"
#include "zblinks/journal.hpp"
#include "zblinks/serialize.hpp"
#include "zblinks/text.hpp"

namespace zblinks {

namespace {

using KeySet = std::set<LinkKey>;
using KeyIndex = std::map<std::string, KeySet>;

bool is_two_digit_area(const std::string& s) {
    return s.size() == 2 && s[0] >= '0' && s[0] <= '9' && s[1] >= '0' && s[1] <= '9';
}

std::set<std::string> record_tokens(const ZbRecord& r) {
    std::set<std::string> tokens;
    for (const auto& a : r.authors()) {
        for (auto& t : tokenize(a)) tokens.insert(std::move(t));
    }
    return tokens;
}

void erase_from(KeyIndex& index, const std::string& bucket, const LinkKey& key) {
    auto it = index.find(bucket);
    if (it == index.end()) return;
    it->second.erase(key);
    if (it->second.empty()) index.erase(it);
}

struct CompiledFilter {
    const LinkFilter* raw = nullptr;
    std::vector<std::string> author_tokens;
};

CompiledFilter compile(const LinkFilter& filter) {
    CompiledFilter c{&filter, {}};
    if (filter.msc && !is_two_digit_area(*filter.msc) && !is_valid_msc_code(*filter.msc)) {
        throw Error(Errc::BadFilter, "malformed MSC filter '" + *filter.msc + "'");
    }
    if (filter.author) {
        c.author_tokens = tokenize(*filter.author);
        if (c.author_tokens.empty()) throw Error(Errc::BadFilter, "author filter has no searchable tokens");
    }
    return c;
}

}  // namespace

struct LinkStore::State {
    std::map<std::string, Partner> partners;
    std::map<std::string, ZbRecord> records;
    std::map<std::string, std::set<std::string>> tokens_by_record;
    std::map<LinkKey, Link> links;
    KeyIndex by_target;
    KeyIndex by_partner;
    KeyIndex by_msc2;
    KeyIndex by_author;
    std::uint64_t seq = 0;

    void index_link(const Link& l) {
        const auto key = l.key();
        const auto& rec = records.at(l.target_zbl());
        by_target[l.target_zbl()].insert(key);
        by_partner[l.partner()].insert(key);
        by_msc2[primary_msc_2digit(rec)].insert(key);
        for (const auto& t : tokens_by_record.at(l.target_zbl())) by_author[t].insert(key);
    }

    void unindex_link(const Link& l) {
        const auto key = l.key();
        const auto& rec = records.at(l.target_zbl());
        erase_from(by_target, l.target_zbl(), key);
        erase_from(by_partner, l.partner(), key);
        erase_from(by_msc2, primary_msc_2digit(rec), key);
        for (const auto& t : tokens_by_record.at(l.target_zbl())) erase_from(by_author, t, key);
    }

    void check_register(const Partner& p) const {
        if (partners.count(p.name())) throw Error(Errc::PartnerExists, "partner " + p.name() + " already exists");
    }

    void check_update(const std::string& name, const Partner& p) const {
        if (!partners.count(name)) throw Error(Errc::UnknownPartner, "unknown partner " + name);
        if (p.name() != name && partners.count(p.name())) {
            throw Error(Errc::PartnerExists, "partner " + p.name() + " already exists");
        }
    }

    void check_add_link(const Link& l) const {
        if (!partners.count(l.partner())) throw Error(Errc::UnknownPartner, "unknown partner " + l.partner());
        if (!records.count(l.target_zbl())) throw Error(Errc::UnknownZbl, "unknown zbl " + l.target_zbl());
        if (links.count(l.key())) {
            throw Error(Errc::DuplicateLink,
                        "link " + l.partner() + " " + l.source_id() + " -> " + l.target_zbl() + " already exists");
        }
    }

    void do_register(const Partner& p) { partners.emplace(p.name(), p); }

    void do_update(const std::string& name, const Partner& p) {
        if (p.name() == name) {
            partners.insert_or_assign(name, p);
            return;
        }
        // Rename: move every link of the partner to the new key.
        std::vector<Link> moved;
        if (auto it = by_partner.find(name); it != by_partner.end()) {
            for (const auto& key : KeySet(it->second)) {
                const Link old = links.at(key);
                unindex_link(old);
                links.erase(key);
                LinkFields f = old.fields();
                f.partner = p.name();
                moved.emplace_back(std::move(f));
            }
        }
        partners.erase(name);
        partners.emplace(p.name(), p);
        for (auto& l : moved) {
            index_link(l);
            links.emplace(l.key(), std::move(l));
        }
    }

    void do_put_record(const ZbRecord& r) {
        std::vector<Link> affected;
        if (auto it = by_target.find(r.zbl_id()); it != by_target.end()) {
            for (const auto& key : KeySet(it->second)) {
                affected.push_back(links.at(key));
                unindex_link(affected.back());
            }
        }
        records.insert_or_assign(r.zbl_id(), r);
        tokens_by_record.insert_or_assign(r.zbl_id(), record_tokens(r));
        for (const auto& l : affected) index_link(l);
    }

    void do_add_link(const Link& l) {
        index_link(l);
        links.emplace(l.key(), l);
    }

    // Journal/snapshot entry dispatch. With dry_run only the checks run.
    void apply(const Json& entry, bool dry_run) {
        const std::string op = require_string(entry, "op");
        if (op == "register_partner") {
            const auto p = require_field(entry, "partner").get<Partner>();
            check_register(p);
            if (!dry_run) do_register(p);
        } else if (op == "update_partner") {
            const auto name = require_string(entry, "name");
            const auto p = require_field(entry, "partner").get<Partner>();
            check_update(name, p);
            if (!dry_run) do_update(name, p);
        } else if (op == "put_record") {
            const auto r = require_field(entry, "record").get<ZbRecord>();
            if (!dry_run) do_put_record(r);
        } else if (op == "add_link") {
            const auto l = require_field(entry, "link").get<Link>();
            check_add_link(l);
            if (!dry_run) do_add_link(l);
        } else {
            throw Error(Errc::Format, "unknown store operation '" + op + "'");
        }
    }

    bool matches(const Link& l, const CompiledFilter& f) const {
        const LinkFilter& raw = *f.raw;
        if (raw.partner && l.partner() != *raw.partner) return false;
        const ZbRecord& rec = records.at(l.target_zbl());
        if (raw.msc) {
            if (raw.msc->size() == 2) {
                if (primary_msc_2digit(rec) != *raw.msc) return false;
            } else {
                const auto& codes = rec.msc_codes();
                if (std::find(codes.begin(), codes.end(), *raw.msc) == codes.end()) return false;
            }
        }
        if (!f.author_tokens.empty()) {
            const auto& have = tokens_by_record.at(l.target_zbl());
            for (const auto& t : f.author_tokens) {
                if (!have.count(t)) return false;
            }
        }
        return true;
    }

    // Visits matching links in key order.
    template <typename Visit>
    void scan(const CompiledFilter& f, Visit&& visit) const {
        static const KeySet kEmpty;
        const KeySet* narrow = nullptr;
        auto consider = [&](const KeyIndex& index, const std::string& bucket) {
            auto it = index.find(bucket);
            const KeySet* set = it == index.end() ? &kEmpty : &it->second;
            if (!narrow || set->size() < narrow->size()) narrow = set;
        };
        if (f.raw->partner) consider(by_partner, *f.raw->partner);
        if (f.raw->msc && f.raw->msc->size() == 2) consider(by_msc2, *f.raw->msc);
        for (const auto& t : f.author_tokens) consider(by_author, t);

        if (narrow) {
            for (const auto& key : *narrow) {
                const Link& l = links.at(key);
                if (matches(l, f) && !visit(l)) return;
            }
        } else {
            for (const auto& [key, l] : links) {
                if (matches(l, f) && !visit(l)) return;
            }
        }
    }

    template <typename Visit>
    void for_partner(const std::optional<std::string>& partner, Visit&& visit) const {
        if (!partner) {
            for (const auto& [key, l] : links) visit(l);
            return;
        }
        auto it = by_partner.find(*partner);
        if (it == by_partner.end()) return;
        for (const auto& key : it->second) visit(links.at(key));
    }

    std::set<std::string> referenced(const std::optional<std::string>& partner) const {
        std::set<std::string> targets;
        for_partner(partner, [&](const Link& l) { targets.insert(l.target_zbl()); });
        return targets;
    }

    std::string snapshot_text() const {
        std::string out = log_header("snapshot", seq) + '\n';
        for (const auto& [name, p] : partners) {
            out += Json{{"op", "register_partner"}, {"partner", p}}.dump() + '\n';
        }
        for (const auto& [id, r] : records) out += Json{{"op", "put_record"}, {"record", r}}.dump() + '\n';
        for (const auto& [key, l] : links) out += Json{{"op", "add_link"}, {"link", l}}.dump() + '\n';
        return out;
    }
};

LinkStore::LinkStore() : state_(std::make_unique<State>()) {}

LinkStore::LinkStore(const std::filesystem::path& dir, Durability durability)
    : state_(std::make_unique<State>()), dir_(dir), durability_(durability) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(Errc::Io, "cannot create store directory " + dir.string() + ": " + ec.message());
    replay(dir);
    journal_ = std::make_unique<JournalWriter>(dir / kJournalFile, durability_);
}

LinkStore::~LinkStore() = default;

void LinkStore::replay(const std::filesystem::path& dir) {
    const auto snapshot = dir / kSnapshotFile;
    const auto journal = dir / kJournalFile;
    auto& st = *state_;

    if (std::filesystem::exists(snapshot)) {
        auto log = read_log(snapshot, "snapshot");
        if (log.torn_tail || log.header.is_null()) throw Error(Errc::Format, "truncated store snapshot");
        for (const auto& e : log.entries) {
            try {
                st.apply(e, false);
            } catch (const Error& err) {
                throw Error(Errc::Format, std::string("corrupt store snapshot: ") + err.what());
            }
        }
        st.seq = log.header.value("seq", std::uint64_t{0});
    }

    if (!std::filesystem::exists(journal)) {
        write_file_atomically(journal, log_header("journal", st.seq) + '\n', durability_);
        return;
    }
    auto log = read_log(journal, "journal");
    if (log.header.is_null()) {
        // never got past the header; start over
        write_file_atomically(journal, log_header("journal", st.seq) + '\n', durability_);
        return;
    }
    for (const auto& e : log.entries) {
        const auto seq = e.value("seq", std::uint64_t{0});
        if (seq <= st.seq) continue;  // already folded into the snapshot
        try {
            st.apply(e, false);
        } catch (const Error& err) {
            throw Error(Errc::Format, "corrupt store journal at seq " + std::to_string(seq) + ": " + err.what());
        }
        st.seq = seq;
    }
    if (log.torn_tail) std::filesystem::resize_file(journal, log.valid_bytes);
}

void LinkStore::append_journal(const std::string& line) {
    if (journal_) journal_->append(line);
}

void LinkStore::register_partner(const Partner& partner) {
    std::unique_lock lock(mutex_);
    Json entry{{"seq", state_->seq + 1}, {"op", "register_partner"}, {"partner", partner}};
    state_->check_register(partner);
    append_journal(entry.dump());
    state_->do_register(partner);
    ++state_->seq;
}

void LinkStore::update_partner(const std::string& name, const Partner& partner) {
    std::unique_lock lock(mutex_);
    Json entry{{"seq", state_->seq + 1}, {"op", "update_partner"}, {"name", name}, {"partner", partner}};
    state_->check_update(name, partner);
    append_journal(entry.dump());
    state_->do_update(name, partner);
    ++state_->seq;
}

void LinkStore::put_record(const ZbRecord& record) {
    std::unique_lock lock(mutex_);
    Json entry{{"seq", state_->seq + 1}, {"op", "put_record"}, {"record", record}};
    append_journal(entry.dump());
    state_->do_put_record(record);
    ++state_->seq;
}

void LinkStore::add_link(const Link& link) {
    std::unique_lock lock(mutex_);
    Json entry{{"seq", state_->seq + 1}, {"op", "add_link"}, {"link", link}};
    state_->check_add_link(link);
    append_journal(entry.dump());
    state_->do_add_link(link);
    ++state_->seq;
}

std::vector<Partner> LinkStore::list_partners() const {
    std::shared_lock lock(mutex_);
    std::vector<Partner> out;
    for (const auto& [name, p] : state_->partners) out.push_back(p);
    return out;
}

std::optional<Partner> LinkStore::partner(const std::string& name) const {
    std::shared_lock lock(mutex_);
    auto it = state_->partners.find(name);
    if (it == state_->partners.end()) return std::nullopt;
    return it->second;
}

std::optional<ZbRecord> LinkStore::record(const std::string& zbl_id) const {
    std::shared_lock lock(mutex_);
    auto it = state_->records.find(zbl_id);
    if (it == state_->records.end()) return std::nullopt;
    return it->second;
}

std::vector<ZbRecord> LinkStore::records() const {
    std::shared_lock lock(mutex_);
    std::vector<ZbRecord> out;
    out.reserve(state_->records.size());
    for (const auto& [id, r] : state_->records) out.push_back(r);
    return out;
}

std::size_t LinkStore::record_count() const {
    std::shared_lock lock(mutex_);
    return state_->records.size();
}

std::size_t LinkStore::link_count() const {
    std::shared_lock lock(mutex_);
    return state_->links.size();
}

std::uint64_t LinkStore::sequence() const {
    std::shared_lock lock(mutex_);
    return state_->seq;
}

std::vector<Link> LinkStore::get_links(const LinkFilter& filter, PageRequest page) const {
    std::vector<Link> out;
    for (auto& r : resolve_links(filter, page)) out.push_back(std::move(r.link));
    return out;
}

std::vector<ResolvedLink> LinkStore::resolve_links(const LinkFilter& filter, PageRequest page) const {
    if (page.limit == 0) throw Error(Errc::BadFilter, "limit must be >= 1");
    const auto compiled = compile(filter);
    std::shared_lock lock(mutex_);
    std::vector<ResolvedLink> out;
    std::size_t skipped = 0;
    state_->scan(compiled, [&](const Link& l) {
        if (skipped < page.offset) {
            ++skipped;
            return true;
        }
        out.push_back({l, state_->records.at(l.target_zbl()), state_->partners.at(l.partner())});
        return out.size() < page.limit;
    });
    return out;
}

std::size_t LinkStore::count_links(const LinkFilter& filter) const {
    const auto compiled = compile(filter);
    std::shared_lock lock(mutex_);
    std::size_t n = 0;
    state_->scan(compiled, [&](const Link&) {
        ++n;
        return true;
    });
    return n;
}

std::optional<Link> LinkStore::get_link_item(const std::string& source_id, const std::string& zbl,
                                             const std::string& partner) const {
    std::shared_lock lock(mutex_);
    auto it = state_->links.find(LinkKey{partner, source_id, zbl});
    if (it == state_->links.end()) return std::nullopt;
    return it->second;
}

std::optional<ResolvedLink> LinkStore::resolve_link_item(const std::string& source_id, const std::string& zbl,
                                                         const std::string& partner) const {
    std::shared_lock lock(mutex_);
    auto it = state_->links.find(LinkKey{partner, source_id, zbl});
    if (it == state_->links.end()) return std::nullopt;
    return ResolvedLink{it->second, state_->records.at(zbl), state_->partners.at(partner)};
}

std::vector<SourceCount> LinkStore::list_sources(const std::optional<std::string>& partner) const {
    std::shared_lock lock(mutex_);
    std::map<std::string, std::size_t> counts;
    state_->for_partner(partner, [&](const Link& l) { ++counts[l.source_id()]; });
    std::vector<SourceCount> out;
    out.reserve(counts.size());
    for (const auto& [id, n] : counts) out.push_back({id, n});
    return out;
}

std::map<std::string, std::size_t> LinkStore::msc_stats(const std::optional<std::string>& partner) const {
    std::shared_lock lock(mutex_);
    std::map<std::string, std::size_t> out;
    for (const auto& id : state_->referenced(partner)) ++out[primary_msc_2digit(state_->records.at(id))];
    return out;
}

std::map<int, std::size_t> LinkStore::year_stats(const std::optional<std::string>& partner) const {
    std::shared_lock lock(mutex_);
    std::map<int, std::size_t> out;
    for (const auto& id : state_->referenced(partner)) ++out[state_->records.at(id).year()];
    return out;
}

std::vector<CitationCount> LinkStore::citation_counts(const std::optional<std::string>& partner,
                                                      std::size_t min_count) const {
    std::shared_lock lock(mutex_);
    std::map<std::string, std::size_t> counts;
    state_->for_partner(partner, [&](const Link& l) { ++counts[l.target_zbl()]; });
    lock.unlock();
    std::vector<CitationCount> out;
    for (const auto& [id, n] : counts) {
        if (n >= min_count) out.push_back({id, n});
    }
    std::sort(out.begin(), out.end(), [](const CitationCount& a, const CitationCount& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.zbl_id < b.zbl_id;
    });
    return out;
}

std::map<int, std::size_t> LinkStore::link_growth(const std::optional<std::string>& partner) const {
    std::shared_lock lock(mutex_);
    std::map<int, std::size_t> per_year;
    state_->for_partner(partner, [&](const Link& l) { ++per_year[l.date_added().year]; });
    lock.unlock();
    std::map<int, std::size_t> out;
    if (per_year.empty()) return out;
    std::size_t running = 0;
    for (int y = per_year.begin()->first; y <= per_year.rbegin()->first; ++y) {
        if (auto it = per_year.find(y); it != per_year.end()) running += it->second;
        out[y] = running;
    }
    return out;
}

std::vector<std::string> LinkStore::audit() const {
    std::shared_lock lock(mutex_);
    const State& st = *state_;
    std::vector<std::string> problems;
    State rebuilt;
    rebuilt.records = st.records;
    for (const auto& [id, r] : st.records) rebuilt.tokens_by_record.emplace(id, record_tokens(r));
    for (const auto& [key, l] : st.links) {
        if (!(key == l.key())) problems.push_back("link stored under a foreign key: " + l.source_id());
        if (!st.partners.count(l.partner())) problems.push_back("link references unknown partner " + l.partner());
        if (!st.records.count(l.target_zbl())) {
            problems.push_back("link references unknown record " + l.target_zbl());
            continue;
        }
        rebuilt.index_link(l);
    }
    if (rebuilt.tokens_by_record != st.tokens_by_record) problems.emplace_back("author token cache out of date");
    if (rebuilt.by_target != st.by_target) problems.emplace_back("target index inconsistent");
    if (rebuilt.by_partner != st.by_partner) problems.emplace_back("partner index inconsistent");
    if (rebuilt.by_msc2 != st.by_msc2) problems.emplace_back("msc index inconsistent");
    if (rebuilt.by_author != st.by_author) problems.emplace_back("author index inconsistent");
    return problems;
}

void LinkStore::compact() {
    std::unique_lock lock(mutex_);
    if (!journal_) throw Error(Errc::InvalidValue, "in-memory store has nothing to compact");
    write_file_atomically(dir_ / kSnapshotFile, state_->snapshot_text(), durability_);
    journal_.reset();
    write_file_atomically(dir_ / kJournalFile, log_header("journal", state_->seq) + '\n', durability_);
    journal_ = std::make_unique<JournalWriter>(dir_ / kJournalFile, durability_);
}

void LinkStore::save(const std::filesystem::path& dir) const {
    std::shared_lock lock(mutex_);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(Errc::Io, "cannot create store directory " + dir.string() + ": " + ec.message());
    write_file_atomically(dir / kSnapshotFile, state_->snapshot_text(), durability_);
    write_file_atomically(dir / kJournalFile, log_header("journal", state_->seq) + '\n', durability_);
}

}  // namespace zblinks
