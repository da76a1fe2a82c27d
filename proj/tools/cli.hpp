#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace zblinks::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct Config {
    std::filesystem::path data_dir = "zblinks-data";
    std::optional<std::filesystem::path> manifest;
    double k1 = 1.2;
    double b = 0.75;
    std::size_t k = 3;
    int max_depth = 5;
    std::size_t min_leaf = 2;
    double split_fraction = 0.8;
    std::uint64_t seed = 42;
    std::string address = "127.0.0.1";
    int port = 8080;
    bool read_only = false;
    bool fsync = true;

    // key=value pairs; unknown keys and out-of-range values throw Errc::InvalidValue
    void apply(const std::string& key, const std::string& value);
    void check() const;
};

// Keys accepted in the config file; each also reads ZBLINKS_<KEY> from the environment.
const std::vector<std::string>& config_keys();

std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path);

// Runs one invocation; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zblinks::cli
