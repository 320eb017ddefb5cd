#include "netanon/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace netanon {

Graph::Graph(int n, std::vector<VertexPair> edges) : n_(n), edges_(std::move(edges)) {
    if (n < 0) throw std::invalid_argument("Graph: negative vertex count");
    for (auto& e : edges_) {
        if (e.first == e.second)
            throw std::invalid_argument("Graph: self-loop at vertex " + std::to_string(e.first));
        if (e.first > e.second) std::swap(e.first, e.second);
        if (e.first < 0 || e.second >= n_)
            throw std::invalid_argument("Graph: endpoint out of range");
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw std::invalid_argument("Graph: duplicate edge");
    adj_.resize(n_);
    for (const auto& [u, v] : edges_) {
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

bool Graph::has_edge(int u, int v) const {
    if (u == v) return false;
    const auto& nb = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
    int other = adj_[u].size() <= adj_[v].size() ? v : u;
    return std::binary_search(nb.begin(), nb.end(), other);
}

Graph Graph::complete(int n) {
    std::vector<VertexPair> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return Graph(n, std::move(edges));
}

Permutation::Permutation(std::vector<int> mapping) : mapping_(std::move(mapping)) {
    std::vector<char> seen(mapping_.size(), 0);
    for (int v : mapping_) {
        if (v < 0 || v >= static_cast<int>(mapping_.size()) || seen[v])
            throw std::invalid_argument("Permutation: mapping is not a bijection");
        seen[v] = 1;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> m(n);
    std::iota(m.begin(), m.end(), 0);
    return Permutation(std::move(m));
}

Permutation Permutation::inverse() const {
    std::vector<int> inv(mapping_.size());
    for (std::size_t i = 0; i < mapping_.size(); ++i) inv[mapping_[i]] = static_cast<int>(i);
    return Permutation(std::move(inv));
}

Permutation Permutation::compose_after(const Permutation& inner) const {
    if (inner.size() != size())
        throw std::invalid_argument("Permutation: size mismatch in composition");
    std::vector<int> m(mapping_.size());
    for (std::size_t i = 0; i < mapping_.size(); ++i) m[i] = mapping_[inner.mapping_[i]];
    return Permutation(std::move(m));
}

CommunityLabeling::CommunityLabeling(std::vector<int> labels, int community_count)
    : labels_(std::move(labels)), communities_(community_count) {
    if (communities_ <= 0) throw std::invalid_argument("CommunityLabeling: no communities");
    members_.resize(communities_);
    for (std::size_t v = 0; v < labels_.size(); ++v) {
        int c = labels_[v];
        if (c < 0 || c >= communities_)
            throw std::invalid_argument("CommunityLabeling: label out of range");
        members_[c].push_back(static_cast<int>(v));
    }
    for (const auto& m : members_)
        if (m.empty()) throw std::invalid_argument("CommunityLabeling: empty community");
}

CommunityLabeling CommunityLabeling::equal_blocks(int n, int communities) {
    if (communities <= 0 || n % communities != 0)
        throw std::invalid_argument("equal_blocks: community count must divide n");
    int block = n / communities;
    std::vector<int> labels(n);
    for (int v = 0; v < n; ++v) labels[v] = v / block;
    return CommunityLabeling(std::move(labels), communities);
}

bool CommunityLabeling::equal_sizes() const {
    for (const auto& m : members_)
        if (m.size() != members_[0].size()) return false;
    return true;
}

CommunityLabeling CommunityLabeling::permuted(const Permutation& pi) const {
    if (pi.size() != size())
        throw std::invalid_argument("CommunityLabeling: permutation size mismatch");
    std::vector<int> out(labels_.size());
    for (int i = 0; i < size(); ++i) out[pi(i)] = labels_[i];
    return CommunityLabeling(std::move(out), communities_);
}

Graph apply_permutation(const Graph& g, const Permutation& phi) {
    if (phi.size() != g.vertex_count())
        throw std::invalid_argument("apply_permutation: size mismatch");
    std::vector<VertexPair> edges;
    edges.reserve(g.edge_count());
    for (const auto& [u, v] : g.edges()) edges.emplace_back(phi(u), phi(v));
    return Graph(g.vertex_count(), std::move(edges));
}

Graph intersect(const Graph& g1, const Graph& g2) {
    if (g1.vertex_count() != g2.vertex_count())
        throw std::invalid_argument("intersect: size mismatch");
    std::vector<VertexPair> edges;
    std::set_intersection(g1.edges().begin(), g1.edges().end(), g2.edges().begin(),
                          g2.edges().end(), std::back_inserter(edges));
    return Graph(g1.vertex_count(), std::move(edges));
}

EdgeDifference symmetric_edge_difference(const Graph& g1, const Graph& g2,
                                         const Permutation& phi,
                                         const CommunityLabeling& labels) {
    if (g1.vertex_count() != g2.vertex_count() || phi.size() != g1.vertex_count() ||
        labels.size() != g1.vertex_count())
        throw std::invalid_argument("symmetric_edge_difference: size mismatch");
    Graph mapped = apply_permutation(g2, phi);
    std::vector<VertexPair> diff;
    std::set_symmetric_difference(g1.edges().begin(), g1.edges().end(),
                                  mapped.edges().begin(), mapped.edges().end(),
                                  std::back_inserter(diff));
    EdgeDifference out;
    for (const auto& [u, v] : diff) {
        if (labels.label(u) == labels.label(v))
            out.intra.emplace_back(u, v);
        else
            out.inter.emplace_back(u, v);
    }
    return out;
}

std::vector<std::vector<int>> isolated_vertices(const Graph& g,
                                                const CommunityLabeling& labels) {
    if (labels.size() != g.vertex_count())
        throw std::invalid_argument("isolated_vertices: size mismatch");
    std::vector<std::vector<int>> out(labels.community_count());
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.degree(v) == 0) out[labels.label(v)].push_back(v);
    return out;
}

bool is_community_preserving(const Permutation& phi, const CommunityLabeling& labels) {
    return is_community_preserving(phi, labels, labels);
}

bool is_community_preserving(const Permutation& phi, const CommunityLabeling& from,
                             const CommunityLabeling& to) {
    if (phi.size() != from.size() || phi.size() != to.size()) return false;
    for (int i = 0; i < phi.size(); ++i)
        if (to.label(phi(i)) != from.label(i)) return false;
    return true;
}

} // namespace netanon
