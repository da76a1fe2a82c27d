#pragma once

// Newline-delimited JSON log files used by the store: a header line
// {"format":"zblinks-store","version":1,"kind":...} followed by one entry per
// line.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "zblinks/linksdb.hpp"

namespace zblinks {

inline constexpr std::string_view kStoreFormat = "zblinks-store";
inline constexpr int kStoreVersion = 1;

std::string log_header(std::string_view kind, std::uint64_t seq);

struct LogContents {
    nlohmann::json header;
    std::vector<nlohmann::json> entries;
    std::uint64_t valid_bytes = 0;  // length up to the last complete line
    bool torn_tail = false;         // trailing bytes without a newline
};

// Throws Errc::Format on a bad header or an unparseable complete line.
LogContents read_log(const std::filesystem::path& file, std::string_view kind);

// Writes `contents` to a temporary sibling and renames it into place.
void write_file_atomically(const std::filesystem::path& file, const std::string& contents, Durability durability);

// Append-only writer. Each append is a single write(2) of the line plus '\n'.
class JournalWriter {
public:
    JournalWriter(const std::filesystem::path& file, Durability durability);
    ~JournalWriter();

    JournalWriter(const JournalWriter&) = delete;
    JournalWriter& operator=(const JournalWriter&) = delete;

    void append(std::string_view line);

private:
    int fd_ = -1;
    Durability durability_;
    std::filesystem::path file_;
};

}  // namespace zblinks
