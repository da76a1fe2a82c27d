#include "fixtures.hpp"

#include <fstream>

#include "zblinks/error.hpp"
#include "zblinks/serialize.hpp"

namespace zblinks::testing {

std::filesystem::path data_path(const std::string& relative) {
    return std::filesystem::path(ZBLINKS_TEST_DATA) / relative;
}

template <typename T>
std::vector<T> read_jsonl(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(Errc::Io, "cannot open " + file.string());
    std::vector<T> out;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(Json::parse(line).get<T>());
    return out;
}

template std::vector<ZbRecord> read_jsonl<ZbRecord>(const std::filesystem::path&);
template std::vector<ArxivRecord> read_jsonl<ArxivRecord>(const std::filesystem::path&);
template std::vector<GroundTruthPair> read_jsonl<GroundTruthPair>(const std::filesystem::path&);
template std::vector<Link> read_jsonl<Link>(const std::filesystem::path&);

Eval20 load_eval20() {
    return {read_jsonl<ZbRecord>(data_path("eval20/zb.jsonl")), read_jsonl<ArxivRecord>(data_path("eval20/arxiv.jsonl")),
            read_jsonl<GroundTruthPair>(data_path("eval20/pairs.jsonl")),
            DecisionTree::load(data_path("eval20/tree.json"))};
}

}  // namespace zblinks::testing
