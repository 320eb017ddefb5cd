#include "netanon/synth.hpp"

#include <cmath>
#include <unordered_set>

#include "netanon/errors.hpp"
#include "netanon/rng.hpp"

namespace netanon {

namespace {

// Visits Bernoulli(p)-selected pairs {A[i], A[j]}, i < j, in row-major order.
template <typename F>
void sample_within(const std::vector<int>& block, double p, Rng& rng, F&& visit) {
    const std::uint64_t s = block.size();
    if (s < 2) return;
    const std::uint64_t m = s * (s - 1) / 2;
    std::uint64_t row = 0;          // index i of the current row
    std::uint64_t row_start = 0;    // linear index of pair (row, row+1)
    sample_bernoulli_indices(m, p, rng, [&](std::uint64_t e) {
        while (e >= row_start + (s - 1 - row)) {
            row_start += s - 1 - row;
            ++row;
        }
        std::uint64_t col = row + 1 + (e - row_start);
        visit(block[row], block[col]);
    });
}

// Visits Bernoulli(p)-selected pairs {A[i], B[j]} in row-major order.
template <typename F>
void sample_between(const std::vector<int>& a, const std::vector<int>& b, double p, Rng& rng,
                    F&& visit) {
    const std::uint64_t m = static_cast<std::uint64_t>(a.size()) * b.size();
    sample_bernoulli_indices(m, p, rng, [&](std::uint64_t e) {
        visit(a[e / b.size()], b[e % b.size()]);
    });
}

std::uint64_t pair_key(int u, int v, int n) {
    if (u > v) std::swap(u, v);
    return static_cast<std::uint64_t>(u) * n + v;
}

} // namespace

SbmParams SbmParams::from_rates(int n, int communities, double a, double b) {
    SbmParams params;
    params.n = n;
    params.communities = communities;
    params.p = a * std::log(static_cast<double>(n)) / n;
    params.q = b * std::log(static_cast<double>(n)) / n;
    params.validate();
    return params;
}

SbmParams SbmParams::from_probabilities(int n, int communities, double p, double q) {
    SbmParams params{n, communities, p, q};
    params.validate();
    return params;
}

void SbmParams::validate() const {
    if (n <= 0) throw ConfigError("SbmParams: vertex count must be positive");
    if (communities <= 0) throw ConfigError("SbmParams: community count must be positive");
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0))
        throw ConfigError("SbmParams: edge probabilities must lie in [0,1]");
    if (q > p) throw ConfigError("SbmParams: requires q <= p");
}

void SampleParams::validate() const {
    for (double v : {s1, s2, t})
        if (!(v >= 0.0 && v <= 1.0))
            throw ConfigError("SampleParams: retention probabilities must lie in [0,1]");
}

std::pair<Graph, CommunityLabeling> sample_sbm(const SbmParams& params, std::uint64_t seed) {
    params.validate();
    if (params.n % params.communities != 0)
        throw ConfigError("sample_sbm: community count must divide n");
    auto labeling = CommunityLabeling::equal_blocks(params.n, params.communities);
    Rng rng(seed);
    std::vector<VertexPair> edges;
    const auto& members = labeling.members();
    for (int k = 0; k < params.communities; ++k)
        sample_within(members[k], params.p, rng,
                      [&](int u, int v) { edges.emplace_back(u, v); });
    for (int k = 0; k < params.communities; ++k)
        for (int l = k + 1; l < params.communities; ++l)
            sample_between(members[k], members[l], params.q, rng,
                           [&](int u, int v) { edges.emplace_back(u, v); });
    return {Graph(params.n, std::move(edges)), std::move(labeling)};
}

Graph subsample_edges(const Graph& g, double t, std::uint64_t seed) {
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("subsample_edges: t must lie in [0,1]");
    Rng rng(seed);
    std::vector<VertexPair> kept;
    sample_bernoulli_indices(g.edge_count(), t, rng,
                             [&](std::uint64_t i) { kept.push_back(g.edges()[i]); });
    return Graph(g.vertex_count(), std::move(kept));
}

CorrelatedPair sample_correlated_pair(const SbmParams& params, const SampleParams& sample,
                                      std::uint64_t seed) {
    sample.validate();
    auto [ground, labeling] = sample_sbm(params, split_seed(seed, 0));
    Graph g1 = subsample_edges(ground, sample.s1, split_seed(seed, 1));
    Graph g2 = subsample_edges(ground, sample.s2, split_seed(seed, 2));
    if (sample.t < 1.0) g2 = subsample_edges(g2, sample.t, split_seed(seed, 3));
    auto [pi, anonymized] = anonymize(g2, split_seed(seed, 4));
    return CorrelatedPair{std::move(ground), std::move(g1),     std::move(g2),
                          std::move(labeling), std::move(pi),   std::move(anonymized),
                          params,              sample,          seed};
}

Graph rewire_edges(const Graph& g, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw ConfigError("rewire_edges: fraction must lie in [0,1]");
    const std::uint64_t total_pairs =
        static_cast<std::uint64_t>(g.vertex_count()) * (g.vertex_count() - 1) / 2;
    const std::uint64_t swaps =
        static_cast<std::uint64_t>(std::llround(fraction * static_cast<double>(g.edge_count())));
    if (swaps == 0) return g;
    if (total_pairs - g.edge_count() < swaps)
        throw ConfigError("rewire_edges: not enough non-edges available");

    Rng rng(seed);
    std::vector<std::uint64_t> order(g.edge_count());
    for (std::uint64_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);

    std::unordered_set<std::uint64_t> present;
    present.reserve(g.edge_count() * 2);
    for (const auto& [u, v] : g.edges()) present.insert(pair_key(u, v, g.vertex_count()));

    std::vector<char> removed(g.edge_count(), 0);
    for (std::uint64_t i = 0; i < swaps; ++i) removed[order[i]] = 1;

    std::vector<VertexPair> edges;
    edges.reserve(g.edge_count());
    for (std::uint64_t i = 0; i < g.edge_count(); ++i)
        if (!removed[i]) edges.push_back(g.edges()[i]);

    // Replacement non-edges are drawn against the original edge set, so a
    // removed edge cannot be re-inserted.
    std::unordered_set<std::uint64_t> added;
    added.reserve(swaps * 2);
    const int n = g.vertex_count();
    while (added.size() < swaps) {
        int u = static_cast<int>(rng.below(n));
        int v = static_cast<int>(rng.below(n));
        if (u == v) continue;
        std::uint64_t key = pair_key(u, v, n);
        if (present.count(key) || added.count(key)) continue;
        added.insert(key);
        if (u > v) std::swap(u, v);
        edges.emplace_back(u, v);
    }
    return Graph(n, std::move(edges));
}

std::pair<Permutation, Graph> anonymize(const Graph& g, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<int> mapping(g.vertex_count());
    for (int i = 0; i < g.vertex_count(); ++i) mapping[i] = i;
    rng.shuffle(mapping);
    Permutation pi(std::move(mapping));
    return {pi, apply_permutation(g, pi)};
}

} // namespace netanon
