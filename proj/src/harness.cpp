#include "netanon/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "netanon/community.hpp"
#include "netanon/errors.hpp"
#include "netanon/rng.hpp"
#include "netanon/theory.hpp"

namespace netanon {

namespace {

std::string now_iso8601() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string join(const std::vector<std::string>& cells, char sep) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out.push_back(sep);
        out += cells[i];
    }
    return out;
}

void atomic_write(const std::string& path, const std::string& contents) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot write " + tmp);
        out << contents;
        if (!out) throw IoError("write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed for " + path + ": " + ec.message());
}

std::string join_doubles(const std::vector<double>& values) {
    std::vector<std::string> cells;
    for (double v : values) cells.push_back(format_double(v));
    return join(cells, ',');
}

std::string join_ints(const std::vector<int>& values) {
    std::vector<std::string> cells;
    for (int v : values) cells.push_back(std::to_string(v));
    return join(cells, ',');
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    for (const auto& cell : split_csv(s))
        if (!cell.empty()) out.push_back(std::stod(cell));
    return out;
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    for (const auto& cell : split_csv(s))
        if (!cell.empty()) out.push_back(std::stoi(cell));
    return out;
}

std::vector<int> default_lambda0_grid() {
    // geometric-ish 10..2000
    return {10, 20, 50, 100, 200, 350, 500, 750, 1000, 1500, 2000};
}

std::vector<VertexPair> select_seed_pairs(const std::vector<int>& order, int count,
                                          const Permutation& pi) {
    std::vector<VertexPair> seeds;
    seeds.reserve(count);
    for (int i = 0; i < count; ++i) seeds.emplace_back(order[i], pi(order[i]));
    return seeds;
}

} // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

IngestResult ingest_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open edge list: " + path);
    IngestResult result;
    std::map<std::string, int> id_map;
    std::vector<VertexPair> edges;
    std::map<std::pair<int, int>, bool> seen;
    std::string line;
    int line_number = 0;
    bool any_content = false;
    while (std::getline(in, line)) {
        ++line_number;
        std::string::size_type start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;
        any_content = true;
        std::istringstream tokens(line);
        std::string u, v, extra;
        if (!(tokens >> u >> v) || (tokens >> extra))
            throw IoError("malformed edge list line " + std::to_string(line_number) + " in " + path);
        auto intern = [&](const std::string& id) {
            auto [it, inserted] = id_map.emplace(id, static_cast<int>(result.ids.size()));
            if (inserted) result.ids.push_back(id);
            return it->second;
        };
        int iu = intern(u);
        int iv = intern(v);
        if (iu == iv) {
            ++result.self_loops_dropped;
            continue;
        }
        std::pair<int, int> key = std::minmax(iu, iv);
        if (seen.emplace(key, true).second)
            edges.emplace_back(key.first, key.second);
        else
            ++result.duplicate_edges_dropped;
    }
    if (!any_content) throw IoError("edge list is empty: " + path);
    result.graph = Graph(static_cast<int>(result.ids.size()), std::move(edges));
    return result;
}

void export_edge_list(const Graph& g, const std::string& path) {
    std::string out;
    for (const auto& [u, v] : g.edges())
        out += std::to_string(u) + " " + std::to_string(v) + "\n";
    atomic_write(path, out);
}

std::vector<int> read_label_file(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open label file: " + path);
    std::vector<int> labels(n, -1);
    int v, label;
    while (in >> v >> label) {
        if (v < 0 || v >= n) throw IoError("label file vertex out of range: " + std::to_string(v));
        labels[v] = label;
    }
    for (int i = 0; i < n; ++i)
        if (labels[i] < 0) throw IoError("label file missing vertex " + std::to_string(i));
    return labels;
}

void write_label_file(const std::vector<int>& labels, const std::string& path) {
    std::string out;
    for (std::size_t v = 0; v < labels.size(); ++v)
        out += std::to_string(v) + " " + std::to_string(labels[v]) + "\n";
    atomic_write(path, out);
}

void Table::add_row(std::initializer_list<std::string> values) {
    rows.emplace_back(values);
}

const Table* RunRecord::find_table(const std::string& name) const {
    for (const auto& t : tables)
        if (t.name == name) return &t;
    return nullptr;
}

bool RunRecord::same_results(const RunRecord& other) const {
    return format_version == other.format_version && experiment == other.experiment &&
           params == other.params && tables == other.tables;
}

void write_run_record(const RunRecord& record, const std::string& path) {
    std::ostringstream out;
    out << "netanon-record " << record.format_version << "\n";
    out << "experiment: " << record.experiment << "\n";
    out << "timestamp: " << (record.timestamp.empty() ? now_iso8601() : record.timestamp) << "\n";
    out << "[params]\n";
    for (const auto& [key, value] : record.params) out << key << " = " << value << "\n";
    for (const auto& table : record.tables) {
        out << "[table " << table.name << "]\n";
        out << join(table.header, ',') << "\n";
        for (const auto& row : table.rows) out << join(row, ',') << "\n";
    }
    out << "[end]\n";
    atomic_write(path, out.str());
}

RunRecord read_run_record(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open run record: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("run record is empty: " + path);
    std::istringstream magic(line);
    std::string tag;
    int version = -1;
    magic >> tag >> version;
    if (tag != "netanon-record") throw IoError("not a run record: " + path);
    if (version != 1)
        throw IoError("unsupported run record version " + std::to_string(version) + " in " + path);

    RunRecord record;
    record.format_version = version;
    enum class Section { Head, Params, Table } section = Section::Head;
    Table* current = nullptr;
    bool header_pending = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line == "[end]") break;
        if (line == "[params]") {
            section = Section::Params;
            continue;
        }
        if (line.rfind("[table ", 0) == 0 && line.back() == ']') {
            record.tables.emplace_back();
            current = &record.tables.back();
            current->name = line.substr(7, line.size() - 8);
            section = Section::Table;
            header_pending = true;
            continue;
        }
        switch (section) {
        case Section::Head: {
            auto colon = line.find(": ");
            if (colon == std::string::npos) throw IoError("malformed record header in " + path);
            std::string key = line.substr(0, colon);
            std::string value = line.substr(colon + 2);
            if (key == "experiment") record.experiment = value;
            else if (key == "timestamp") record.timestamp = value;
            break;
        }
        case Section::Params: {
            auto eq = line.find(" = ");
            if (eq == std::string::npos) throw IoError("malformed params line in " + path);
            record.params[line.substr(0, eq)] = line.substr(eq + 3);
            break;
        }
        case Section::Table:
            if (header_pending) {
                current->header = split_csv(line);
                header_pending = false;
            } else {
                current->rows.push_back(split_csv(line));
            }
            break;
        }
    }
    return record;
}

void write_table_csv(const Table& table, const std::string& path) {
    std::string out = join(table.header, ',') + "\n";
    for (const auto& row : table.rows) out += join(row, ',') + "\n";
    atomic_write(path, out);
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid config JSON: ") + e.what());
    }
    ExperimentConfig c;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).template get<std::decay_t<decltype(field)>>();
    };
    get("kind", c.kind);
    get("n", c.n);
    get("communities", c.communities);
    get("a", c.a);
    get("b", c.b);
    get("s", c.s);
    get("s1", c.s1);
    get("s2", c.s2);
    get("t", c.t);
    get("deltas", c.deltas);
    get("rs", c.rs);
    get("lambda0s", c.lambda0s);
    get("ts", c.ts);
    get("epsilons", c.epsilons);
    get("grid_max_a", c.grid_max_a);
    get("grid_max_b", c.grid_max_b);
    get("grid_step", c.grid_step);
    get("input", c.input);
    get("rewire_fraction", c.rewire_fraction);
    get("lambda0", c.lambda0);
    get("trials", c.trials);
    get("seed", c.seed);
    c.validate();
    return c;
}

std::map<std::string, std::string> ExperimentConfig::to_params() const {
    std::map<std::string, std::string> p;
    p["kind"] = kind;
    p["n"] = std::to_string(n);
    p["communities"] = std::to_string(communities);
    p["a"] = format_double(a);
    p["b"] = format_double(b);
    p["s"] = format_double(s);
    p["s1"] = format_double(s1);
    p["s2"] = format_double(s2);
    p["t"] = format_double(t);
    p["deltas"] = join_doubles(deltas);
    p["rs"] = join_ints(rs);
    p["lambda0s"] = join_ints(lambda0s);
    p["ts"] = join_doubles(ts);
    p["epsilons"] = join_doubles(epsilons);
    p["grid_max_a"] = format_double(grid_max_a);
    p["grid_max_b"] = format_double(grid_max_b);
    p["grid_step"] = format_double(grid_step);
    p["input"] = input;
    p["rewire_fraction"] = format_double(rewire_fraction);
    p["lambda0"] = std::to_string(lambda0);
    p["trials"] = std::to_string(trials);
    p["seed"] = std::to_string(seed);
    return p;
}

ExperimentConfig ExperimentConfig::from_params(const std::string& kind,
                                               const std::map<std::string, std::string>& params) {
    ExperimentConfig c;
    c.kind = kind;
    auto get = [&](const char* key) -> std::optional<std::string> {
        auto it = params.find(key);
        if (it == params.end()) return std::nullopt;
        return it->second;
    };
    if (auto v = get("n")) c.n = std::stoi(*v);
    if (auto v = get("communities")) c.communities = std::stoi(*v);
    if (auto v = get("a")) c.a = std::stod(*v);
    if (auto v = get("b")) c.b = std::stod(*v);
    if (auto v = get("s")) c.s = std::stod(*v);
    if (auto v = get("s1")) c.s1 = std::stod(*v);
    if (auto v = get("s2")) c.s2 = std::stod(*v);
    if (auto v = get("t")) c.t = std::stod(*v);
    if (auto v = get("deltas")) c.deltas = parse_doubles(*v);
    if (auto v = get("rs")) c.rs = parse_ints(*v);
    if (auto v = get("lambda0s")) c.lambda0s = parse_ints(*v);
    if (auto v = get("ts")) c.ts = parse_doubles(*v);
    if (auto v = get("epsilons")) c.epsilons = parse_doubles(*v);
    if (auto v = get("grid_max_a")) c.grid_max_a = std::stod(*v);
    if (auto v = get("grid_max_b")) c.grid_max_b = std::stod(*v);
    if (auto v = get("grid_step")) c.grid_step = std::stod(*v);
    if (auto v = get("input")) c.input = *v;
    if (auto v = get("rewire_fraction")) c.rewire_fraction = std::stod(*v);
    if (auto v = get("lambda0")) c.lambda0 = std::stoi(*v);
    if (auto v = get("trials")) c.trials = std::stoi(*v);
    if (auto v = get("seed")) c.seed = std::stoull(*v);
    c.validate();
    return c;
}

void ExperimentConfig::validate() const {
    if (kind != "sbm-pgm" && kind != "region-sweep" && kind != "real-network" && kind != "certify")
        throw ConfigError("unknown experiment kind: " + kind);
    if (trials <= 0) throw ConfigError("trials must be positive");
    if (kind == "sbm-pgm" && (deltas.empty() || rs.empty()))
        throw ConfigError("sbm-pgm requires deltas and rs");
    if (kind == "region-sweep" && ts.empty()) throw ConfigError("region-sweep requires ts");
    if (kind == "real-network" && input.empty())
        throw ConfigError("real-network requires an input edge list");
}

double solve_t_for_delta(double a, double b, double s, double delta) {
    double t = 2.0 * (1.0 + delta) / ((a + b) * s * s);
    if (!(t > 0.0 && t <= 1.0))
        throw ConfigError("offset " + format_double(delta) +
                          " is infeasible: requires t = " + format_double(t));
    return t;
}

RunRecord run_sbm_experiment(const ExperimentConfig& config) {
    config.validate();
    ExperimentConfig c = config;
    if (c.lambda0s.empty()) c.lambda0s = default_lambda0_grid();
    RunRecord record;
    record.experiment = c.kind;
    record.timestamp = now_iso8601();
    record.params = c.to_params();

    Table table;
    table.name = "pgm";
    table.header = {"delta", "t", "r", "lambda0", "trial", "mapped", "evaluated",
                    "incorrect", "error_rate"};

    SampleParams sample;
    sample.s1 = c.s;
    sample.s2 = c.s;
    std::uint64_t stream = 0;
    for (double delta : c.deltas) {
        sample.t = solve_t_for_delta(c.a, c.b, c.s, delta);
        SbmParams sbm = SbmParams::from_rates(c.n, c.communities, c.a, c.b);
        for (int trial = 0; trial < c.trials; ++trial) {
            std::uint64_t trial_seed = split_seed(c.seed, stream++);
            CorrelatedPair pair = sample_correlated_pair(sbm, sample, trial_seed);
            CommunityLabeling anon_labels = pair.labeling.permuted(pair.pi);
            for (int r : c.rs) {
                Rng pick(split_seed(trial_seed, 50 + static_cast<std::uint64_t>(r)));
                std::vector<int> order(c.n);
                std::iota(order.begin(), order.end(), 0);
                pick.shuffle(order);
                for (int lambda0 : c.lambda0s) {
                    if (lambda0 > c.n) continue;
                    auto seeds = select_seed_pairs(order, lambda0, pair.pi);
                    PgmParams params{r, true};
                    AttackResult result = pgm_attack(pair.g1, pair.anonymized, seeds, params,
                                                     &pair.labeling, &anon_labels);
                    AttackMetrics m = evaluate_attack(result, pair.pi);
                    table.add_row({format_double(delta), format_double(sample.t),
                                   std::to_string(r), std::to_string(lambda0),
                                   std::to_string(trial), std::to_string(m.mapped_count),
                                   std::to_string(m.evaluated), std::to_string(m.incorrect),
                                   format_double(m.error_rate)});
                }
            }
        }
    }
    record.tables.push_back(std::move(table));
    return record;
}

RunRecord run_region_sweep(const ExperimentConfig& config) {
    config.validate();
    RunRecord record;
    record.experiment = config.kind;
    record.timestamp = now_iso8601();
    record.params = config.to_params();

    Table cells;
    cells.name = "grid";
    cells.header = {"t", "a", "b", "cd_possible", "da_impossible", "safe",
                    "cd_margin", "converse_margin"};
    Table summary;
    summary.name = "summary";
    summary.header = {"t", "cells", "safe_cells"};

    for (double t : config.ts) {
        long long total = 0, safe = 0;
        for (double a = 0.0; a <= config.grid_max_a; a += config.grid_step) {
            for (double b = 0.0; b <= std::min(a, config.grid_max_b); b += config.grid_step) {
                RegionQuery q;
                q.a = a;
                q.b = b;
                q.communities = config.communities;
                q.s1 = config.s1;
                q.s2 = config.s2;
                q.t = t;
                RegionVerdict v = safe_region_query(q);
                ++total;
                if (v.safe) ++safe;
                cells.add_row({format_double(t), format_double(a), format_double(b),
                               v.cd_possible ? "1" : "0", v.da_impossible ? "1" : "0",
                               v.safe ? "1" : "0", format_double(v.cd_margin),
                               format_double(v.converse_margin)});
            }
        }
        summary.add_row({format_double(t), std::to_string(total), std::to_string(safe)});
    }
    record.tables.push_back(std::move(cells));
    record.tables.push_back(std::move(summary));
    return record;
}

RunRecord run_real_experiment(const ExperimentConfig& config) {
    config.validate();
    IngestResult ingest = ingest_edge_list(config.input);
    const Graph& original = ingest.graph;

    RunRecord record;
    record.experiment = config.kind;
    record.timestamp = now_iso8601();
    record.params = config.to_params();
    record.params["vertices"] = std::to_string(original.vertex_count());
    record.params["edges"] = std::to_string(original.edge_count());

    DetectedPartition baseline = detect_communities(original, split_seed(config.seed, 0));

    Table preservation;
    preservation.name = "preservation";
    preservation.header = {"t", "communities", "min_size", "max_size", "modularity"};
    for (double eps : config.epsilons)
        preservation.header.push_back("preserved_" + format_double(1.0 - eps));

    Table largest;
    largest.name = "largest_communities";
    largest.header = {"t", "rank", "base_size", "jaccard"};

    // ranks of the five largest baseline communities
    std::vector<int> by_size(baseline.labeling.community_count());
    std::iota(by_size.begin(), by_size.end(), 0);
    std::sort(by_size.begin(), by_size.end(), [&](int x, int y) {
        return baseline.labeling.members()[x].size() > baseline.labeling.members()[y].size();
    });
    by_size.resize(std::min<std::size_t>(5, by_size.size()));

    std::vector<double> ts_with_baseline = config.ts;
    std::sort(ts_with_baseline.begin(), ts_with_baseline.end(), std::greater<>());
    std::uint64_t stream = 10;
    for (double t : ts_with_baseline) {
        DetectedPartition part =
            t >= 1.0 ? baseline
                     : detect_communities(subsample_edges(original, t, split_seed(config.seed, stream)),
                                          split_seed(config.seed, stream + 1));
        stream += 2;
        CommunityComparison cmp = match_communities(baseline, part, config.epsilons);
        std::vector<std::string> row = {format_double(t), std::to_string(cmp.other_count),
                                        std::to_string(cmp.other_min),
                                        std::to_string(cmp.other_max),
                                        format_double(part.modularity)};
        for (int count : cmp.preserved) row.push_back(std::to_string(count));
        preservation.rows.push_back(std::move(row));

        for (std::size_t rank = 0; rank < by_size.size(); ++rank) {
            for (const auto& match : cmp.matches) {
                if (match.base_community != by_size[rank]) continue;
                largest.add_row({format_double(t), std::to_string(rank + 1),
                                 std::to_string(match.base_size), format_double(match.jaccard)});
                break;
            }
        }
    }

    // Deanonymization side: auxiliary graph from edge rewiring, released graph
    // from subsampling + uniform relabeling.
    Table attack;
    attack.name = "attack";
    attack.header = {"t", "r", "trial", "mapped", "evaluated", "incorrect", "error_rate"};
    Graph aux = rewire_edges(original, config.rewire_fraction, split_seed(config.seed, 1));
    std::uint64_t attack_stream = 1000;
    for (double t : ts_with_baseline) {
        for (int trial = 0; trial < config.trials; ++trial) {
            std::uint64_t trial_seed = split_seed(config.seed, attack_stream++);
            Graph released = subsample_edges(original, t, split_seed(trial_seed, 0));
            auto [pi, anonymized] = anonymize(released, split_seed(trial_seed, 1));
            Rng pick(split_seed(trial_seed, 2));
            std::vector<int> order(original.vertex_count());
            std::iota(order.begin(), order.end(), 0);
            pick.shuffle(order);
            auto seeds = select_seed_pairs(order, config.lambda0, pi);
            for (int r : config.rs) {
                PgmParams params{r, false};
                AttackResult result = pgm_attack(aux, anonymized, seeds, params);
                AttackMetrics m = evaluate_attack(result, pi);
                attack.add_row({format_double(t), std::to_string(r), std::to_string(trial),
                                std::to_string(m.mapped_count), std::to_string(m.evaluated),
                                std::to_string(m.incorrect), format_double(m.error_rate)});
            }
        }
    }

    record.tables.push_back(std::move(preservation));
    record.tables.push_back(std::move(largest));
    record.tables.push_back(std::move(attack));
    return record;
}

RunRecord run_certify_experiment(const ExperimentConfig& config) {
    config.validate();
    RunRecord record;
    record.experiment = config.kind;
    record.timestamp = now_iso8601();
    record.params = config.to_params();

    Table per_community;
    per_community.name = "isolated";
    per_community.header = {"trial", "community", "isolated", "bits"};
    Table summary;
    summary.name = "summary";
    summary.header = {"trial", "total_isolated", "log2_automorphism_bound"};

    SbmParams sbm = SbmParams::from_rates(config.n, config.communities, config.a, config.b);
    SampleParams sample{config.s1, config.s2, config.t};
    for (int trial = 0; trial < config.trials; ++trial) {
        CorrelatedPair pair = sample_correlated_pair(sbm, sample, split_seed(config.seed, trial));
        AnonymityCertificate cert = certify_anonymity(pair.g1, pair.g2, pair.labeling);
        for (std::size_t k = 0; k < cert.isolated_per_community.size(); ++k)
            per_community.add_row({std::to_string(trial), std::to_string(k),
                                   std::to_string(cert.isolated_per_community[k]),
                                   format_double(cert.bits_per_community[k])});
        summary.add_row({std::to_string(trial), std::to_string(cert.total_isolated),
                         format_double(cert.log2_automorphism_bound)});
    }
    record.tables.push_back(std::move(per_community));
    record.tables.push_back(std::move(summary));
    return record;
}

RunRecord run_experiment(const ExperimentConfig& config) {
    config.validate();
    if (config.kind == "sbm-pgm") return run_sbm_experiment(config);
    if (config.kind == "region-sweep") return run_region_sweep(config);
    if (config.kind == "real-network") return run_real_experiment(config);
    return run_certify_experiment(config);
}

RunRecord replay_run_record(const RunRecord& record) {
    auto kind = record.params.find("kind");
    if (kind == record.params.end())
        throw ConfigError("run record has no experiment kind parameter");
    ExperimentConfig config = ExperimentConfig::from_params(kind->second, record.params);
    return run_experiment(config);
}

} // namespace netanon
