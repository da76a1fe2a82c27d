#include "zblinks/journal.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fcntl.h>
#include <unistd.h>

#include "zblinks/error.hpp"

namespace zblinks {

namespace {

[[noreturn]] void io_failure(const std::string& what, const std::filesystem::path& file) {
    throw Error(Errc::Io, what + " " + file.string() + ": " + std::strerror(errno));
}

void write_all(int fd, std::string_view data, const std::filesystem::path& file) {
    while (!data.empty()) {
        const ssize_t n = ::write(fd, data.data(), data.size());
        if (n < 0) {
            if (errno == EINTR) continue;
            io_failure("write failed for", file);
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
}

void sync_directory(const std::filesystem::path& dir) {
    const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
    if (fd < 0) return;
    ::fsync(fd);
    ::close(fd);
}

}  // namespace

std::string log_header(std::string_view kind, std::uint64_t seq) {
    return nlohmann::json{{"format", kStoreFormat}, {"version", kStoreVersion}, {"kind", kind}, {"seq", seq}}.dump();
}

LogContents read_log(const std::filesystem::path& file, std::string_view kind) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot open " + file.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string data = buffer.str();

    LogContents contents;
    std::size_t pos = 0;
    bool have_header = false;
    while (pos < data.size()) {
        const auto eol = data.find('\n', pos);
        if (eol == std::string::npos) {
            contents.torn_tail = true;
            break;
        }
        const std::string_view line(data.data() + pos, eol - pos);
        nlohmann::json value;
        try {
            value = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::Format, file.filename().string() + ": corrupt line at byte " + std::to_string(pos));
        }
        if (!have_header) {
            if (value.value("format", "") != kStoreFormat || value.value("version", 0) != kStoreVersion ||
                value.value("kind", "") != kind) {
                throw Error(Errc::Format, file.filename().string() + ": unexpected header");
            }
            contents.header = std::move(value);
            have_header = true;
        } else {
            contents.entries.push_back(std::move(value));
        }
        pos = eol + 1;
        contents.valid_bytes = pos;
    }
    if (!have_header) contents.header = nullptr;
    return contents;
}

void write_file_atomically(const std::filesystem::path& file, const std::string& contents, Durability durability) {
    auto tmp = file;
    tmp += ".tmp";
    const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (fd < 0) io_failure("cannot create", tmp);
    try {
        write_all(fd, contents, tmp);
        if (durability == Durability::Fsync && ::fsync(fd) != 0) io_failure("fsync failed for", tmp);
    } catch (...) {
        ::close(fd);
        throw;
    }
    ::close(fd);
    std::error_code ec;
    std::filesystem::rename(tmp, file, ec);
    if (ec) throw Error(Errc::Io, "cannot rename " + tmp.string() + ": " + ec.message());
    if (durability == Durability::Fsync) sync_directory(file.parent_path());
}

JournalWriter::JournalWriter(const std::filesystem::path& file, Durability durability)
    : durability_(durability), file_(file) {
    fd_ = ::open(file.c_str(), O_WRONLY | O_APPEND | O_CLOEXEC);
    if (fd_ < 0) io_failure("cannot open journal", file);
}

JournalWriter::~JournalWriter() {
    if (fd_ >= 0) ::close(fd_);
}

void JournalWriter::append(std::string_view line) {
    std::string buf;
    buf.reserve(line.size() + 1);
    buf.append(line);
    buf.push_back('\n');
    const off_t before = ::lseek(fd_, 0, SEEK_END);
    try {
        write_all(fd_, buf, file_);
        if (durability_ == Durability::Fsync && ::fdatasync(fd_) != 0) io_failure("fsync failed for", file_);
    } catch (...) {
        // drop the partial line so the next append starts on a line boundary
        if (before >= 0 && ::ftruncate(fd_, before) != 0) {
            // nothing more to do; replay drops a torn tail anyway
        }
        throw;
    }
}

}  // namespace zblinks
