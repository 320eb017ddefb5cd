#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netanon/attacks.hpp"
#include "netanon/graph.hpp"
#include "netanon/synth.hpp"

namespace netanon {

struct IngestResult {
    Graph graph;
    std::vector<std::string> ids; // dense vertex -> original identifier
    int duplicate_edges_dropped = 0;
    int self_loops_dropped = 0;
};

// Whitespace-separated vertex pairs, '#' comment lines ignored. Identifiers
// are compacted to 0..n-1 in first-appearance order.
IngestResult ingest_edge_list(const std::string& path);

// Canonical numeric edge list, one "u v" pair per line.
void export_edge_list(const Graph& g, const std::string& path);

std::vector<int> read_label_file(const std::string& path, int n);
void write_label_file(const std::vector<int>& labels, const std::string& path);

struct Table {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::initializer_list<std::string> values);
    friend bool operator==(const Table&, const Table&) = default;
};

// Self-describing experiment output: every parameter needed to replay the run
// is embedded. Timestamps are excluded from equality.
struct RunRecord {
    int format_version = 1;
    std::string experiment;
    std::string timestamp;
    std::map<std::string, std::string> params;
    std::vector<Table> tables;

    const Table* find_table(const std::string& name) const;
    bool same_results(const RunRecord& other) const;
};

void write_run_record(const RunRecord& record, const std::string& path);
RunRecord read_run_record(const std::string& path);
void write_table_csv(const Table& table, const std::string& path);

struct ExperimentConfig {
    std::string kind; // sbm-pgm | region-sweep | real-network | certify

    // synthetic model
    int n = 5000;
    int communities = 2;
    double a = 20.0;
    double b = 5.0;
    double s = 0.6; // s1 = s2 = s for delta-driven runs
    double s1 = 0.1;
    double s2 = 0.5;
    double t = 1.0;

    std::vector<double> deltas = {-0.4, -0.05, 0.05, 0.75};
    std::vector<int> rs = {4};
    std::vector<int> lambda0s;
    std::vector<double> ts = {0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<double> epsilons = {0.1, 0.15};

    // region sweep grid
    double grid_max_a = 100.0;
    double grid_max_b = 100.0;
    double grid_step = 1.0;

    // real-network settings
    std::string input;
    double rewire_fraction = 0.3;
    int lambda0 = 500;

    int trials = 5;
    std::uint64_t seed = 1;

    static ExperimentConfig from_json_file(const std::string& path);
    static ExperimentConfig from_params(const std::string& kind,
                                        const std::map<std::string, std::string>& params);
    std::map<std::string, std::string> to_params() const;
    void validate() const;
};

RunRecord run_sbm_experiment(const ExperimentConfig& config);
RunRecord run_region_sweep(const ExperimentConfig& config);
RunRecord run_real_experiment(const ExperimentConfig& config);
RunRecord run_certify_experiment(const ExperimentConfig& config);

RunRecord run_experiment(const ExperimentConfig& config);

// Re-runs the experiment described by a record's embedded parameters.
RunRecord replay_run_record(const RunRecord& record);

// For delta-driven runs with s1 = s2 = s: the publisher subsampling t that
// realizes the requested offset.
double solve_t_for_delta(double a, double b, double s, double delta);

// Formats a double so that reading it back reproduces the exact value.
std::string format_double(double value);

} // namespace netanon
