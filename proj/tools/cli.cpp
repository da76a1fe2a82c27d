#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "zblinks/api.hpp"
#include "zblinks/error.hpp"
#include "zblinks/ingest.hpp"
#include "zblinks/kernels.hpp"
#include "zblinks/linksdb.hpp"
#include "zblinks/matcher.hpp"
#include "zblinks/serialize.hpp"
#include "zblinks/server.hpp"

namespace zblinks::cli {

namespace fs = std::filesystem;

namespace {

// data_dir layout
constexpr const char* kStoreDir = "store";
constexpr const char* kArxivFile = "arxiv.jsonl";
constexpr const char* kIndexFile = "arxiv.index.json";
constexpr const char* kGroundTruthFile = "ground_truth.jsonl";
constexpr const char* kTrainFile = "split_train.jsonl";
constexpr const char* kTestFile = "split_test.jsonl";
constexpr const char* kTreeFile = "tree.json";
constexpr const char* kMatchesFile = "matches.jsonl";

// citations.csv keeps references cited more than 50 times unless --min-citations says otherwise
constexpr std::size_t kCitationCsvMin = 51;

struct UsageError : Error {
    using Error::Error;
};

std::string trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    const auto lo = s.find_first_not_of(ws);
    if (lo == std::string_view::npos) return {};
    const auto hi = s.find_last_not_of(ws);
    return std::string(s.substr(lo, hi - lo + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) throw UsageError(Errc::InvalidValue, "bad value for " + key + ": '" + value + "'");
    return out;
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used == value.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(Errc::InvalidValue, "bad value for " + key + ": '" + value + "'");
}

bool parse_bool(const std::string& key, const std::string& value) {
    std::string v = value;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw UsageError(Errc::InvalidValue, "bad value for " + key + ": '" + value + "'");
}

std::string env_name(const std::string& key) {
    std::string n = "ZBLINKS_";
    for (char c : key) n.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    return n;
}

template <typename T>
std::vector<T> read_ndjson(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open " + path.string());
    std::vector<T> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (trim(line).empty()) continue;
        try {
            out.push_back(Json::parse(line).get<T>());
        } catch (const Json::exception& e) {
            throw Error(Errc::MalformedLine, path.string() + ":" + std::to_string(n) + ": " + e.what());
        } catch (const Error& e) {
            throw Error(e.code(), path.string() + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

template <typename T>
void write_ndjson(const fs::path& path, const std::vector<T>& items) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write " + path.string());
    for (const auto& item : items) out << Json(item).dump() << '\n';
    if (!out.flush()) throw Error(Errc::Io, "write failed for " + path.string());
}

std::vector<ZbRecord> zb_from_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open " + path.string());
    return parse_zb_snapshot(in, {true}).items;
}

std::vector<ArxivRecord> arxiv_from_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open " + path.string() + " (run ingest first?)");
    return parse_arxiv_snapshot(in, {true}).items;
}

// Opens an existing store; a missing directory is a data error, not an empty store.
std::unique_ptr<LinkStore> open_store(const Config& cfg) {
    const fs::path dir = cfg.data_dir / kStoreDir;
    if (!fs::exists(dir / kSnapshotFile) && !fs::exists(dir / kJournalFile)) {
        throw Error(Errc::Io, "no store in " + dir.string() + " (run ingest first)");
    }
    return std::make_unique<LinkStore>(dir, cfg.fsync ? Durability::Fsync : Durability::Flush);
}

Bm25Params bm25(const Config& cfg) { return {cfg.k1, cfg.b}; }

ArxivCatalog arxiv_catalog(const Config& cfg, std::vector<ArxivRecord> records) {
    const fs::path index_path = cfg.data_dir / kIndexFile;
    if (fs::exists(index_path)) {
        auto index = TextIndex::load(index_path);
        if (index.params() == bm25(cfg)) {
            try {
                return ArxivCatalog(std::move(records), std::move(index));
            } catch (const Error&) {
                // stale index; rebuild from the records below
            }
        }
    }
    return ArxivCatalog(std::move(records), bm25(cfg));
}

std::string fixed4(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << v;
    return s.str();
}

void write_csv(const fs::path& path, const std::string& header, const std::vector<std::pair<std::string, std::size_t>>& rows) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw Error(Errc::Io, "cannot write " + path.string());
    out << header << '\n';
    for (const auto& [k, v] : rows) out << k << ',' << v << '\n';
    if (!out.flush()) throw Error(Errc::Io, "write failed for " + path.string());
}

template <typename Map>
std::vector<std::pair<std::string, std::size_t>> rows_of(const Map& m) {
    std::vector<std::pair<std::string, std::size_t>> rows;
    for (const auto& [k, v] : m) {
        if constexpr (std::is_same_v<std::decay_t<decltype(k)>, std::string>) {
            rows.emplace_back(k, v);
        } else {
            rows.emplace_back(std::to_string(k), v);
        }
    }
    return rows;
}

// ---- subcommands ----

struct IngestArgs {
    std::string manifest;
    bool strict = false;
};

int cmd_ingest(const Config& cfg, const IngestArgs& args, std::ostream& out, std::ostream& err) {
    fs::path manifest_path = args.manifest.empty() ? cfg.manifest.value_or(fs::path()) : fs::path(args.manifest);
    if (manifest_path.empty()) throw UsageError(Errc::InvalidValue, "ingest needs a manifest path");
    const auto manifest = SnapshotManifest::load(manifest_path);
    const auto snap = load_snapshot(manifest, {args.strict});

    std::size_t rejected = 0;
    std::size_t duplicates = 0;
    for (const auto& [file, e] : snap.errors) {
        if (e.code == Errc::DuplicateLink) {
            ++duplicates;
            continue;
        }
        ++rejected;
        err << file << ":" << e.line << ": " << e.reason << '\n';
    }

    LinkStore store;
    for (const auto& p : snap.partners) store.register_partner(p);
    for (const auto& r : snap.zb_records) store.put_record(r);
    std::size_t dangling = 0;
    for (const auto& l : snap.links) {
        try {
            store.add_link(l);
        } catch (const Error& e) {
            if (e.code() == Errc::DuplicateLink) {
                ++duplicates;
                continue;
            }
            if (args.strict) throw;
            ++dangling;
            err << "link " << l.partner() << " " << l.source_id() << " -> " << l.target_zbl() << ": " << e.what() << '\n';
        }
    }

    fs::create_directories(cfg.data_dir);
    store.save(cfg.data_dir / kStoreDir);
    write_ndjson(cfg.data_dir / kArxivFile, snap.arxiv_records);

    out << "partners " << store.list_partners().size() << '\n'
        << "zb_records " << store.record_count() << '\n'
        << "arxiv_records " << snap.arxiv_records.size() << '\n'
        << "references " << store.citation_counts().size() << '\n'
        << "distinct_links " << store.link_count() << '\n'
        << "duplicate_lines " << duplicates << '\n'
        << "rejected " << rejected + dangling << '\n';
    return kOk;
}

int cmd_build_index(const Config& cfg, std::ostream& out) {
    const auto records = arxiv_from_file(cfg.data_dir / kArxivFile);
    const auto index = TextIndex::build(index_documents(std::span<const ArxivRecord>(records)), bm25(cfg));
    index.save(cfg.data_dir / kIndexFile);
    out << "indexed " << index.doc_count() << " arXiv records, " << index.vocabulary_size() << " terms\n";
    return kOk;
}

int cmd_ground_truth(const Config& cfg, std::ostream& out) {
    auto store = open_store(cfg);
    const ZbCatalog zb(store->records(), bm25(cfg));
    const auto arxiv = arxiv_from_file(cfg.data_dir / kArxivFile);
    const auto gt = build_ground_truth(zb, arxiv);
    write_ndjson(cfg.data_dir / kGroundTruthFile, gt.pairs);
    out << "positives " << gt.positives << '\n'
        << "negatives " << gt.negatives << '\n'
        << "ambiguous_dois " << gt.ambiguous_dois.size() << '\n'
        << "without_doi " << gt.without_doi << '\n';
    for (const auto& d : gt.ambiguous_dois) out << "ambiguous " << d << '\n';
    return kOk;
}

int cmd_train(const Config& cfg, std::ostream& out) {
    const auto pairs = read_ndjson<GroundTruthPair>(cfg.data_dir / kGroundTruthFile);
    const auto split = split_ground_truth(pairs, cfg.split_fraction, cfg.seed);
    write_ndjson(cfg.data_dir / kTrainFile, split.train);
    write_ndjson(cfg.data_dir / kTestFile, split.test);

    auto store = open_store(cfg);
    const ZbCatalog zb(store->records(), bm25(cfg));
    const auto arxiv = arxiv_catalog(cfg, arxiv_from_file(cfg.data_dir / kArxivFile));
    const auto samples = training_samples(split.train, zb, arxiv, cfg.k);
    const auto tree = train_tree(samples, {cfg.max_depth, cfg.min_leaf, cfg.seed});
    tree.save(cfg.data_dir / kTreeFile);

    std::size_t correct = 0;
    for (const auto& s : samples) correct += tree.predict(s.features) == s.label ? 1 : 0;
    out << "train_pairs " << split.train.size() << '\n'
        << "test_pairs " << split.test.size() << '\n'
        << "seed_used " << split.seed_used << '\n'
        << "samples " << samples.size() << '\n'
        << "tree_nodes " << tree.nodes().size() << " depth " << tree.depth() << '\n'
        << "training_accuracy " << fixed4(static_cast<double>(correct) / static_cast<double>(samples.size())) << '\n';
    return kOk;
}

int cmd_match(const Config& cfg, std::size_t k, std::ostream& out) {
    auto store = open_store(cfg);
    const auto records = store->records();
    const auto arxiv = arxiv_catalog(cfg, arxiv_from_file(cfg.data_dir / kArxivFile));
    const auto tree = DecisionTree::load(cfg.data_dir / kTreeFile);

    // records already tied to a preprint through a shared DOI need no matching
    std::set<std::string> linked;
    if (fs::exists(cfg.data_dir / kGroundTruthFile)) {
        for (const auto& p : read_ndjson<GroundTruthPair>(cfg.data_dir / kGroundTruthFile)) {
            if (p.label) linked.insert(p.zbl_id);
        }
    }
    std::vector<const ZbRecord*> todo;
    for (const auto& r : records) {
        if (!linked.count(r.zbl_id())) todo.push_back(&r);
    }

    const auto results = match_all(todo, arxiv, tree, k);
    std::ofstream file(cfg.data_dir / kMatchesFile, std::ios::trunc);
    if (!file) throw Error(Errc::Io, "cannot write " + (cfg.data_dir / kMatchesFile).string());
    std::size_t chosen = 0;
    for (const auto& m : results) {
        Json cands = Json::array();
        for (const auto& c : m.candidates_examined) {
            cands.push_back({{"arxiv_id", c.arxiv_id}, {"features", c.features}, {"verdict", c.verdict}});
        }
        Json line{{"zbl_id", m.zbl_id}, {"arxiv_id", nullptr}, {"candidates", std::move(cands)}};
        if (m.chosen_arxiv) {
            line["arxiv_id"] = *m.chosen_arxiv;
            ++chosen;
        }
        file << line.dump() << '\n';
    }
    out << "matched " << chosen << " of " << results.size() << " records (k=" << k << ")\n";
    return kOk;
}

struct EvalArgs {
    std::string zb, arxiv, tree, pairs;
};

int cmd_eval(const Config& cfg, const EvalArgs& a, std::ostream& out) {
    const auto pairs = read_ndjson<GroundTruthPair>(a.pairs.empty() ? cfg.data_dir / kTestFile : fs::path(a.pairs));
    std::vector<ZbRecord> zb_records;
    if (!a.zb.empty()) {
        zb_records = zb_from_file(a.zb);
    } else {
        zb_records = open_store(cfg)->records();
    }
    const ZbCatalog zb(std::move(zb_records), bm25(cfg));
    const auto arxiv = a.arxiv.empty() ? arxiv_catalog(cfg, arxiv_from_file(cfg.data_dir / kArxivFile))
                                       : ArxivCatalog(arxiv_from_file(a.arxiv), bm25(cfg));
    const auto tree = DecisionTree::load(a.tree.empty() ? cfg.data_dir / kTreeFile : fs::path(a.tree));
    const auto r = evaluate(pairs, zb, arxiv, tree, cfg.k);
    out << "pairs " << pairs.size() << '\n'
        << "tp " << r.true_positives << " fp " << r.false_positives << " fn " << r.false_negatives << '\n'
        << "precision " << fixed4(r.precision) << '\n'
        << "recall " << fixed4(r.recall) << '\n';
    return kOk;
}

struct StatsArgs {
    std::string partner;
    std::string csv_dir;
    std::size_t min_citations = kCitationCsvMin;
};

int cmd_stats(const Config& cfg, const StatsArgs& a, std::ostream& out) {
    auto store = open_store(cfg);
    std::optional<std::string> partner;
    if (!a.partner.empty()) {
        if (!store->partner(a.partner)) throw Error(Errc::UnknownPartner, "unknown partner " + a.partner);
        partner = a.partner;
    }
    const auto msc = store->msc_stats(partner);
    const auto years = store->year_stats(partner);
    const auto cites = store->citation_counts(partner, 1);
    const auto growth = store->link_growth(partner);

    out << "# msc records\n";
    for (const auto& [k, v] : msc) out << k << ' ' << v << '\n';
    out << "# year records\n";
    for (const auto& [k, v] : years) out << k << ' ' << v << '\n';
    out << "# top cited\n";
    for (std::size_t i = 0; i < cites.size() && i < 10; ++i) out << cites[i].zbl_id << ' ' << cites[i].count << '\n';
    out << "# cumulative links\n";
    for (const auto& [k, v] : growth) out << k << ' ' << v << '\n';

    if (!a.csv_dir.empty()) {
        const fs::path dir = a.csv_dir;
        fs::create_directories(dir);
        write_csv(dir / "link_growth.csv", "year,links", rows_of(growth));
        write_csv(dir / "msc.csv", "msc,records", rows_of(msc));
        write_csv(dir / "year.csv", "year,records", rows_of(years));
        std::vector<std::pair<std::string, std::size_t>> top;
        for (const auto& c : store->citation_counts(partner, a.min_citations)) top.emplace_back(c.zbl_id, c.count);
        write_csv(dir / "citations.csv", "zbl_id,links", top);
        out << "wrote 4 CSV files to " << dir.string() << '\n';
    }
    return kOk;
}

int cmd_serve(const Config& cfg, std::ostream& out) {
    const fs::path dir = cfg.data_dir / kStoreDir;
    LinkStore store(dir, cfg.fsync ? Durability::Fsync : Durability::Flush);
    ApiService service(store, {cfg.read_only});
    HttpServer server(service);
    const int port = server.bind({cfg.address, cfg.port});
    out << "serving " << store.link_count() << " links on http://" << cfg.address << ':' << port
        << (cfg.read_only ? " (read-only)" : "") << std::endl;
    server.serve();
    return kOk;
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {"data_dir", "manifest",  "k1",   "b",       "k",
                                                  "max_depth", "min_leaf", "split_fraction", "seed",
                                                  "address",  "port",      "read_only", "fsync"};
    return keys;
}

void Config::apply(const std::string& key, const std::string& value) {
    if (key == "data_dir") {
        data_dir = value;
    } else if (key == "manifest") {
        manifest = fs::path(value);
    } else if (key == "k1") {
        k1 = parse_real(key, value);
    } else if (key == "b") {
        b = parse_real(key, value);
    } else if (key == "k") {
        k = parse_number<std::size_t>(key, value);
    } else if (key == "max_depth") {
        max_depth = parse_number<int>(key, value);
    } else if (key == "min_leaf") {
        min_leaf = parse_number<std::size_t>(key, value);
    } else if (key == "split_fraction") {
        split_fraction = parse_real(key, value);
    } else if (key == "seed") {
        seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "address") {
        address = value;
    } else if (key == "port") {
        port = parse_number<int>(key, value);
    } else if (key == "read_only") {
        read_only = parse_bool(key, value);
    } else if (key == "fsync") {
        fsync = parse_bool(key, value);
    } else {
        throw UsageError(Errc::InvalidValue, "unknown config key '" + key + "'");
    }
}

void Config::check() const {
    auto fail = [](const std::string& m) { throw UsageError(Errc::InvalidValue, m); };
    if (data_dir.empty()) fail("data_dir must not be empty");
    if (!(k1 >= 0.0)) fail("k1 must be >= 0");
    if (!(b >= 0.0 && b <= 1.0)) fail("b must lie in [0,1]");
    if (k < 1) fail("k must be >= 1");
    if (max_depth < 0) fail("max_depth must be >= 0");
    if (min_leaf < 1) fail("min_leaf must be >= 1");
    if (!(split_fraction > 0.0 && split_fraction < 1.0)) fail("split_fraction must lie in (0,1)");
    if (port < 0 || port > 65535) fail("port must lie in [0,65535]");
}

std::map<std::string, std::string> parse_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError(Errc::Io, "cannot read config " + path.string());
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        const auto t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw UsageError(Errc::InvalidValue, path.string() + ":" + std::to_string(n) + ": expected key=value");
        }
        out[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"zbMATH Open links: ingest, match arXiv preprints, serve the link API", "zblinks"};
    app.require_subcommand(1);
    app.fallthrough();

    // global settings; kept as strings so "given on the command line" is observable
    std::map<std::string, std::string> flag_values;
    std::string config_path;
    app.add_option("--config", config_path, "key=value config file (also ZBLINKS_CONFIG)");
    for (const auto& key : config_keys()) {
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        app.add_option(flag, flag_values[key], "config key " + key + " (env " + env_name(key) + ")");
    }

    IngestArgs ingest_args;
    auto* ingest = app.add_subcommand("ingest", "Parse a snapshot manifest and rebuild the store");
    ingest->add_option("manifest", ingest_args.manifest, "snapshot manifest (JSON)");
    ingest->add_flag("--strict", ingest_args.strict, "fail on the first bad line");

    auto* build_index = app.add_subcommand("build-index", "Build and persist the arXiv text index");
    auto* ground_truth = app.add_subcommand("ground-truth", "Derive labeled pairs from DOI equality");
    auto* train = app.add_subcommand("train", "Split ground truth and train the decision tree");

    std::size_t match_k = 0;
    auto* match = app.add_subcommand("match", "Match zbMATH records without a DOI-linked preprint");
    match->add_option("--k", match_k, "candidates per record")->check(CLI::PositiveNumber);

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Evaluate the tree on held-out pairs");
    eval->add_option("--zb", eval_args.zb, "zbMATH records (NDJSON) instead of the store");
    eval->add_option("--arxiv", eval_args.arxiv, "arXiv records (NDJSON)");
    eval->add_option("--tree", eval_args.tree, "tree file");
    eval->add_option("--pairs", eval_args.pairs, "labeled pairs (NDJSON)");

    StatsArgs stats_args;
    auto* stats = app.add_subcommand("stats", "Print link statistics");
    stats->add_option("--partner", stats_args.partner, "restrict to one partner");
    stats->add_option("--csv", stats_args.csv_dir, "also write chart data as CSV into DIR");
    stats->add_option("--min-citations", stats_args.min_citations, "citations.csv cutoff (default 51)");

    auto* serve = app.add_subcommand("serve", "Run the HTTP API");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    Config cfg;
    try {
        // defaults < file < environment < flags
        if (config_path.empty()) {
            if (const char* env = std::getenv("ZBLINKS_CONFIG")) config_path = env;
        }
        if (!config_path.empty()) {
            for (const auto& [k, v] : parse_config_file(config_path)) cfg.apply(k, v);
        }
        for (const auto& key : config_keys()) {
            if (const char* env = std::getenv(env_name(key).c_str())) cfg.apply(key, env);
        }
        for (const auto& key : config_keys()) {
            std::string flag = "--" + key;
            std::replace(flag.begin(), flag.end(), '_', '-');
            if (app.count(flag) > 0) cfg.apply(key, flag_values[key]);
        }
        if (match->parsed() && match_k > 0) cfg.k = match_k;
        cfg.check();
    } catch (const Error& e) {
        err << "zblinks: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(cfg, ingest_args, out, err);
        if (build_index->parsed()) return cmd_build_index(cfg, out);
        if (ground_truth->parsed()) return cmd_ground_truth(cfg, out);
        if (train->parsed()) return cmd_train(cfg, out);
        if (match->parsed()) return cmd_match(cfg, cfg.k, out);
        if (eval->parsed()) return cmd_eval(cfg, eval_args, out);
        if (stats->parsed()) return cmd_stats(cfg, stats_args, out);
        if (serve->parsed()) return cmd_serve(cfg, out);
    } catch (const UsageError& e) {
        err << "zblinks: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "zblinks: " << errc_name(e.code()) << ": " << e.what() << '\n';
        return kData;
    } catch (const std::exception& e) {
        err << "zblinks: internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}

}  // namespace zblinks::cli
