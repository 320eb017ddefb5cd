#include "netanon/community.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "netanon/rng.hpp"

namespace netanon {

namespace {

// Weighted multigraph used during aggregation passes.
struct WGraph {
    int n = 0;
    std::vector<std::vector<std::pair<int, double>>> adj; // neighbor, weight; no self entries
    std::vector<double> self;     // self-loop weight, counted once
    std::vector<double> strength; // weighted degree, self-loops counted twice
    double total2 = 0.0;          // 2m
};

WGraph from_graph(const Graph& g) {
    WGraph w;
    w.n = g.vertex_count();
    w.adj.resize(w.n);
    w.self.assign(w.n, 0.0);
    w.strength.assign(w.n, 0.0);
    for (const auto& [u, v] : g.edges()) {
        w.adj[u].emplace_back(v, 1.0);
        w.adj[v].emplace_back(u, 1.0);
        w.strength[u] += 1.0;
        w.strength[v] += 1.0;
    }
    w.total2 = 2.0 * static_cast<double>(g.edge_count());
    return w;
}

// One round of local moving. Returns the community assignment (not compacted)
// and whether any vertex moved.
bool local_move(const WGraph& w, Rng& rng, std::vector<int>& comm) {
    comm.resize(w.n);
    std::iota(comm.begin(), comm.end(), 0);
    std::vector<double> sigma = w.strength; // total strength per community

    std::vector<int> order(w.n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    std::vector<double> link(w.n, 0.0); // weight from u to each community
    std::vector<int> touched;
    bool moved_any = false;
    int moves = 1;
    while (moves > 0) {
        moves = 0;
        for (int u : order) {
            touched.clear();
            for (const auto& [v, weight] : w.adj[u]) {
                int c = comm[v];
                if (link[c] == 0.0) touched.push_back(c);
                link[c] += weight;
            }
            int c_old = comm[u];
            sigma[c_old] -= w.strength[u];
            if (link[c_old] == 0.0) touched.push_back(c_old);

            int best = c_old;
            double best_gain = link[c_old] - w.strength[u] * sigma[c_old] / w.total2;
            for (int c : touched) {
                if (c == c_old) continue;
                double gain = link[c] - w.strength[u] * sigma[c] / w.total2;
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best = c;
                }
            }
            sigma[best] += w.strength[u];
            comm[u] = best;
            if (best != c_old) {
                ++moves;
                moved_any = true;
            }
            for (int c : touched) link[c] = 0.0;
        }
    }
    return moved_any;
}

int compact_labels(std::vector<int>& labels) {
    std::vector<int> remap(labels.size(), -1);
    int next = 0;
    for (int& l : labels) {
        if (remap[l] == -1) remap[l] = next++;
        l = remap[l];
    }
    return next;
}

WGraph aggregate(const WGraph& w, const std::vector<int>& comm, int communities) {
    WGraph out;
    out.n = communities;
    out.adj.resize(communities);
    out.self.assign(communities, 0.0);
    out.strength.assign(communities, 0.0);
    out.total2 = w.total2;

    std::vector<double> acc(communities, 0.0);
    std::vector<int> touched;
    std::vector<std::vector<int>> members(communities);
    for (int v = 0; v < w.n; ++v) members[comm[v]].push_back(v);
    for (int c = 0; c < communities; ++c) {
        touched.clear();
        double self_weight = 0.0;
        for (int v : members[c]) {
            self_weight += w.self[v];
            for (const auto& [u, weight] : w.adj[v]) {
                int cu = comm[u];
                if (cu == c) {
                    self_weight += weight / 2.0; // each internal edge visited twice
                } else {
                    if (acc[cu] == 0.0) touched.push_back(cu);
                    acc[cu] += weight;
                }
            }
        }
        out.self[c] = self_weight;
        std::sort(touched.begin(), touched.end());
        for (int cu : touched) {
            out.adj[c].emplace_back(cu, acc[cu]);
            acc[cu] = 0.0;
        }
        out.strength[c] = 2.0 * self_weight;
        for (const auto& [cu, weight] : out.adj[c]) out.strength[c] += weight;
    }
    return out;
}

} // namespace

DetectedPartition detect_communities(const Graph& g, std::uint64_t seed, int min_size_filter) {
    if (g.vertex_count() == 0) throw std::invalid_argument("detect_communities: empty graph");
    std::vector<int> labels(g.vertex_count());
    std::iota(labels.begin(), labels.end(), 0);
    if (g.edge_count() == 0)
        return DetectedPartition{CommunityLabeling(labels, g.vertex_count()), 0.0, min_size_filter};

    Rng rng(seed);
    WGraph w = from_graph(g);
    std::vector<int> vertex_node(g.vertex_count()); // original vertex -> current supervertex
    std::iota(vertex_node.begin(), vertex_node.end(), 0);

    std::vector<int> comm;
    while (local_move(w, rng, comm)) {
        int communities = compact_labels(comm);
        for (int v = 0; v < g.vertex_count(); ++v) vertex_node[v] = comm[vertex_node[v]];
        if (communities == w.n) break;
        w = aggregate(w, comm, communities);
    }

    std::vector<int> final_labels = vertex_node;
    int count = compact_labels(final_labels);
    CommunityLabeling labeling(std::move(final_labels), count);
    double q = modularity(g, labeling);
    return DetectedPartition{std::move(labeling), q, min_size_filter};
}

double modularity(const Graph& g, const CommunityLabeling& labels) {
    if (labels.size() != g.vertex_count())
        throw std::invalid_argument("modularity: size mismatch");
    double m = static_cast<double>(g.edge_count());
    if (m == 0.0) return 0.0;
    std::vector<double> intra(labels.community_count(), 0.0);
    std::vector<double> degree_sum(labels.community_count(), 0.0);
    for (const auto& [u, v] : g.edges())
        if (labels.label(u) == labels.label(v)) intra[labels.label(u)] += 1.0;
    for (int v = 0; v < g.vertex_count(); ++v)
        degree_sum[labels.label(v)] += static_cast<double>(g.degree(v));
    double q = 0.0;
    for (int c = 0; c < labels.community_count(); ++c) {
        double frac = degree_sum[c] / (2.0 * m);
        q += intra[c] / m - frac * frac;
    }
    return q;
}

double jaccard_index(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::vector<int> sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::size_t i = 0, j = 0, common = 0;
    while (i < sa.size() && j < sb.size()) {
        if (sa[i] == sb[j]) {
            ++common;
            ++i;
            ++j;
        } else if (sa[i] < sb[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return static_cast<double>(common) / static_cast<double>(sa.size() + sb.size() - common);
}

CommunityComparison match_communities(const DetectedPartition& base,
                                      const DetectedPartition& other,
                                      const std::vector<double>& epsilons) {
    if (base.labeling.size() != other.labeling.size())
        throw std::invalid_argument("match_communities: vertex universes differ");
    CommunityComparison out;
    out.epsilons = epsilons;
    out.preserved.assign(epsilons.size(), 0);

    auto stats = [](const DetectedPartition& p, int& count, int& min_size, int& max_size) {
        count = 0;
        min_size = 0;
        max_size = 0;
        for (const auto& m : p.labeling.members()) {
            int size = static_cast<int>(m.size());
            if (size < p.min_size_filter) continue;
            ++count;
            if (count == 1 || size < min_size) min_size = size;
            if (size > max_size) max_size = size;
        }
    };
    stats(base, out.base_count, out.base_min, out.base_max);
    stats(other, out.other_count, out.other_min, out.other_max);

    for (int c = 0; c < base.labeling.community_count(); ++c) {
        const auto& members = base.labeling.members()[c];
        if (static_cast<int>(members.size()) < base.min_size_filter) continue;
        CommunityMatch match;
        match.base_community = c;
        match.base_size = static_cast<int>(members.size());
        for (int oc = 0; oc < other.labeling.community_count(); ++oc) {
            double j = jaccard_index(members, other.labeling.members()[oc]);
            if (match.best_match == -1 || j > match.jaccard) {
                match.best_match = oc;
                match.jaccard = j;
            }
        }
        for (std::size_t e = 0; e < epsilons.size(); ++e)
            if (match.jaccard >= 1.0 - epsilons[e]) ++out.preserved[e];
        out.matches.push_back(match);
    }
    return out;
}

namespace {

// Exact maximum assignment over a square score matrix via subset DP.
double best_assignment(const std::vector<std::vector<double>>& score) {
    const int k = static_cast<int>(score.size());
    std::vector<double> dp(std::size_t(1) << k, -1.0);
    dp[0] = 0.0;
    for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << k); ++mask) {
        if (dp[mask] < 0.0) continue;
        int row = __builtin_popcount(mask);
        if (row == k) continue;
        for (int col = 0; col < k; ++col) {
            if (mask & (std::uint32_t(1) << col)) continue;
            std::uint32_t next = mask | (std::uint32_t(1) << col);
            double value = dp[mask] + score[row][col];
            if (value > dp[next]) dp[next] = value;
        }
    }
    return dp[(std::size_t(1) << k) - 1];
}

} // namespace

double label_agreement(const CommunityLabeling& labels, const CommunityLabeling& truth) {
    if (labels.size() != truth.size())
        throw std::invalid_argument("label_agreement: size mismatch");
    const int c1 = labels.community_count();
    const int c2 = truth.community_count();
    const int k = std::max(c1, c2);
    std::vector<std::vector<double>> overlap(k, std::vector<double>(k, 0.0));
    for (int v = 0; v < labels.size(); ++v) overlap[labels.label(v)][truth.label(v)] += 1.0;

    double matched;
    if (k <= 20) {
        matched = best_assignment(overlap);
    } else {
        // Greedy: repeatedly take the largest remaining overlap cell.
        std::vector<char> row_used(k, 0), col_used(k, 0);
        matched = 0.0;
        for (int step = 0; step < k; ++step) {
            int bi = -1, bj = -1;
            double best = -1.0;
            for (int i = 0; i < k; ++i) {
                if (row_used[i]) continue;
                for (int j = 0; j < k; ++j) {
                    if (col_used[j]) continue;
                    if (overlap[i][j] > best) {
                        best = overlap[i][j];
                        bi = i;
                        bj = j;
                    }
                }
            }
            row_used[bi] = 1;
            col_used[bj] = 1;
            matched += best;
        }
    }
    return matched / static_cast<double>(labels.size());
}

} // namespace netanon
