#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "netanon/community.hpp"
#include "netanon/errors.hpp"
#include "netanon/harness.hpp"
#include "netanon/rng.hpp"
#include "netanon/theory.hpp"

namespace {

using namespace netanon;

CommunityLabeling load_labels(const std::string& path, int n) {
    std::vector<int> labels = read_label_file(path, n);
    int communities = 0;
    for (int l : labels) communities = std::max(communities, l + 1);
    return CommunityLabeling(std::move(labels), communities);
}

std::vector<VertexPair> load_seed_pairs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open seed file: " + path);
    std::vector<VertexPair> seeds;
    int u, v;
    while (in >> u >> v) seeds.emplace_back(u, v);
    return seeds;
}

void write_mapping(const AttackResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write mapping: " + path);
    for (std::size_t u = 0; u < result.mapping.size(); ++u)
        if (result.mapping[u] != -1) out << u << " " << result.mapping[u] << "\n";
}

void emit_record(const RunRecord& record, const std::string& out, const std::string& format) {
    if (format == "csv") {
        for (const auto& table : record.tables)
            write_table_csv(table, out + "." + table.name + ".csv");
    } else {
        write_run_record(record, out);
    }
}

int run(int argc, char** argv) {
    CLI::App app{"SBM privacy toolkit: correlated-graph generation, sanitization, "
                 "deanonymization attacks, anonymity certificates, and safe-region analysis"};
    app.require_subcommand(1);
    app.fallthrough(); // accept the global flags after a subcommand name

    std::uint64_t seed = 1;
    std::string out = "netanon.out";
    std::string format = "record";
    app.add_option("--seed", seed, "RNG seed")->capture_default_str();
    app.add_option("--out", out, "output path")->capture_default_str();
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "record"}));

    // generate
    auto* generate = app.add_subcommand("generate", "sample an SBM graph");
    int gen_n = 1000, gen_c = 2;
    double gen_a = 20.0, gen_b = 5.0, gen_p = -1.0, gen_q = -1.0;
    std::string gen_labels;
    generate->add_option("--n", gen_n, "vertex count");
    generate->add_option("--communities", gen_c, "community count");
    generate->add_option("--a", gen_a, "intra rate, p = a log n / n");
    generate->add_option("--b", gen_b, "inter rate, q = b log n / n");
    generate->add_option("--p", gen_p, "raw intra probability (overrides --a)");
    generate->add_option("--q", gen_q, "raw inter probability (overrides --b)");
    generate->add_option("--labels", gen_labels, "also write the planted labels here");

    // sanitize
    auto* sanitize = app.add_subcommand("sanitize", "subsample and/or rewire an edge list");
    std::string san_in;
    double san_t = 1.0, san_rewire = 0.0;
    bool san_anonymize = false;
    sanitize->add_option("--in", san_in, "input edge list")->required();
    sanitize->add_option("--t", san_t, "edge retention probability");
    sanitize->add_option("--rewire", san_rewire, "fraction of edges to rewire");
    sanitize->add_flag("--anonymize", san_anonymize, "apply a uniform random relabeling");

    // attack pgm / attack map
    auto* attack = app.add_subcommand("attack", "run a deanonymization attack");
    attack->require_subcommand(1);
    auto* pgm = attack->add_subcommand("pgm", "percolation graph matching");
    std::string pgm_aux, pgm_anon, pgm_seeds, pgm_l1, pgm_l2;
    int pgm_r = 2;
    pgm->add_option("--aux", pgm_aux, "auxiliary edge list")->required();
    pgm->add_option("--anon", pgm_anon, "anonymized edge list")->required();
    pgm->add_option("--seeds", pgm_seeds, "seed pair file, one 'u v' per line")->required();
    pgm->add_option("--r", pgm_r, "mark threshold");
    pgm->add_option("--labels1", pgm_l1, "auxiliary labels (enables community constraint)");
    pgm->add_option("--labels2", pgm_l2, "anonymized labels");

    auto* map = attack->add_subcommand("map", "exhaustive MAP on small instances");
    std::string map_aux, map_anon, map_l1, map_l2;
    double map_p = 0.5, map_q = 0.1, map_s1 = 0.5, map_s2 = 0.5;
    map->add_option("--aux", map_aux)->required();
    map->add_option("--anon", map_anon)->required();
    map->add_option("--labels1", map_l1)->required();
    map->add_option("--labels2", map_l2)->required();
    map->add_option("--p", map_p, "model intra probability");
    map->add_option("--q", map_q, "model inter probability");
    map->add_option("--s1", map_s1, "auxiliary retention");
    map->add_option("--s2", map_s2, "sensitive retention");

    // certify
    auto* certify = app.add_subcommand("certify", "isolated-vertex anonymity certificate");
    std::string cert_g1, cert_g2, cert_labels;
    certify->add_option("--g1", cert_g1, "auxiliary edge list")->required();
    certify->add_option("--g2", cert_g2, "sensitive edge list (aligned ids)")->required();
    certify->add_option("--labels", cert_labels, "community labels")->required();

    // region
    auto* region = app.add_subcommand("region", "threshold verdicts for one parameter point");
    RegionQuery query;
    region->add_option("--a", query.a)->required();
    region->add_option("--b", query.b)->required();
    region->add_option("--communities", query.communities);
    region->add_option("--s1", query.s1);
    region->add_option("--s2", query.s2);
    region->add_option("--t", query.t);
    region->add_option("--alpha", query.alpha);

    // communities
    auto* communities = app.add_subcommand("communities", "modularity-based community detection");
    std::string comm_in;
    int comm_min_size = 4;
    communities->add_option("--in", comm_in, "input edge list")->required();
    communities->add_option("--min-size", comm_min_size, "true-community size filter");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "run a full experiment from a config");
    std::string exp_kind, exp_config;
    bool exp_scale = false;
    experiment->add_option("kind", exp_kind, "sbm-pgm | region-sweep | real-network | certify")
        ->required();
    experiment->add_option("--config", exp_config, "JSON config file");
    experiment->add_flag("--scale", exp_scale, "shrink to CI scale (n=1000, 5 trials)");

    // replay
    auto* replay = app.add_subcommand("replay", "re-run a record and check reproducibility");
    std::string replay_in;
    replay->add_option("--in", replay_in, "run record to replay")->required();

    CLI11_PARSE(app, argc, argv);

    if (generate->parsed()) {
        SbmParams params = gen_p >= 0.0
                               ? SbmParams::from_probabilities(gen_n, gen_c, gen_p,
                                                               gen_q >= 0.0 ? gen_q : 0.0)
                               : SbmParams::from_rates(gen_n, gen_c, gen_a, gen_b);
        auto [graph, labeling] = sample_sbm(params, seed);
        export_edge_list(graph, out);
        if (!gen_labels.empty()) write_label_file(labeling.labels(), gen_labels);
        std::cout << "generated n=" << graph.vertex_count() << " edges=" << graph.edge_count()
                  << " -> " << out << "\n";
    } else if (sanitize->parsed()) {
        Graph g = ingest_edge_list(san_in).graph;
        if (san_t < 1.0) g = subsample_edges(g, san_t, split_seed(seed, 0));
        if (san_rewire > 0.0) g = rewire_edges(g, san_rewire, split_seed(seed, 1));
        if (san_anonymize) {
            auto [pi, anon] = anonymize(g, split_seed(seed, 2));
            write_label_file(pi.mapping(), out + ".pi");
            g = std::move(anon);
        }
        export_edge_list(g, out);
        std::cout << "sanitized edges=" << g.edge_count() << " -> " << out << "\n";
    } else if (pgm->parsed()) {
        Graph aux = ingest_edge_list(pgm_aux).graph;
        Graph anon = ingest_edge_list(pgm_anon).graph;
        auto seeds = load_seed_pairs(pgm_seeds);
        PgmParams params{pgm_r, !pgm_l1.empty()};
        AttackResult result;
        if (params.community_constrained) {
            if (pgm_l2.empty()) throw ConfigError("--labels1 requires --labels2");
            CommunityLabeling l1 = load_labels(pgm_l1, aux.vertex_count());
            CommunityLabeling l2 = load_labels(pgm_l2, anon.vertex_count());
            result = pgm_attack(aux, anon, seeds, params, &l1, &l2);
        } else {
            result = pgm_attack(aux, anon, seeds, params);
        }
        write_mapping(result, out);
        std::cout << "pgm mapped " << result.mapped_count << " of " << aux.vertex_count()
                  << " vertices -> " << out << "\n";
    } else if (map->parsed()) {
        Graph aux = ingest_edge_list(map_aux).graph;
        Graph anon = ingest_edge_list(map_anon).graph;
        CommunityLabeling l1 = load_labels(map_l1, aux.vertex_count());
        CommunityLabeling l2 = load_labels(map_l2, anon.vertex_count());
        MapConstants constants = map_constants(map_p, map_q, map_s1, map_s2);
        auto argmin = brute_force_map(aux, anon, l1, l2, constants);
        std::ofstream mappings(out);
        if (!mappings) throw IoError("cannot write " + out);
        for (const auto& phi : argmin) {
            for (int i = 0; i < phi.size(); ++i) mappings << (i ? " " : "") << phi(i);
            mappings << "\n";
        }
        std::cout << "map argmin set size " << argmin.size() << " -> " << out << "\n";
    } else if (certify->parsed()) {
        Graph g1 = ingest_edge_list(cert_g1).graph;
        Graph g2 = ingest_edge_list(cert_g2).graph;
        CommunityLabeling labels = load_labels(cert_labels, g1.vertex_count());
        AnonymityCertificate cert = certify_anonymity(g1, g2, labels);
        for (std::size_t k = 0; k < cert.isolated_per_community.size(); ++k)
            std::cout << "community " << k << ": isolated=" << cert.isolated_per_community[k]
                      << " bits=" << cert.bits_per_community[k] << "\n";
        std::cout << "total isolated: " << cert.total_isolated << "\n"
                  << "log2 automorphism bound: " << cert.log2_automorphism_bound << "\n";
    } else if (region->parsed()) {
        RegionVerdict v = safe_region_query(query);
        std::cout << "community recovery possible: " << (v.cd_possible ? "yes" : "no")
                  << " (margin " << v.cd_margin << ")\n"
                  << "deanonymization impossible:  " << (v.da_impossible ? "yes" : "no")
                  << " (margin " << v.converse_margin << ")\n"
                  << "achievability holds:         " << (v.ach_possible ? "yes" : "no")
                  << " (margin " << v.ach_margin << ")\n"
                  << "safe: " << (v.safe ? "yes" : "no") << "\n";
        SubsampleWindow w = subsample_window(query.a, query.b, query.communities, query.s1, query.s2);
        if (w.nonempty)
            std::cout << "safe subsampling window: t in (" << w.t_min << ", " << w.t_max << ")\n";
        else
            std::cout << "safe subsampling window: empty\n";
    } else if (communities->parsed()) {
        Graph g = ingest_edge_list(comm_in).graph;
        DetectedPartition part = detect_communities(g, seed, comm_min_size);
        write_label_file(part.labeling.labels(), out);
        int true_communities = 0;
        for (const auto& m : part.labeling.members())
            if (static_cast<int>(m.size()) >= comm_min_size) ++true_communities;
        std::cout << "communities: " << part.labeling.community_count() << " ("
                  << true_communities << " with size >= " << comm_min_size
                  << "), modularity " << part.modularity << " -> " << out << "\n";
    } else if (experiment->parsed()) {
        ExperimentConfig config = exp_config.empty() ? ExperimentConfig{}
                                                     : ExperimentConfig::from_json_file(exp_config);
        if (exp_config.empty()) config.kind = exp_kind;
        if (config.kind != exp_kind)
            throw ConfigError("config kind '" + config.kind + "' does not match '" + exp_kind + "'");
        if (!app.get_option("--seed")->empty()) config.seed = seed;
        if (exp_scale) {
            config.n = std::min(config.n, 1000);
            config.trials = std::min(config.trials, 5);
        }
        config.validate();
        RunRecord record = run_experiment(config);
        emit_record(record, out, format);
        std::cout << "experiment " << config.kind << " done -> " << out << "\n";
    } else if (replay->parsed()) {
        RunRecord original = read_run_record(replay_in);
        RunRecord rerun = replay_run_record(original);
        bool same = rerun.same_results(original);
        std::cout << (same ? "replay reproduced the record exactly"
                           : "replay DIFFERS from the record")
                  << "\n";
        if (!same) return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const netanon::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const netanon::CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const netanon::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
