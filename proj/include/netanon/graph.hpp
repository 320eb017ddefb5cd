#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace netanon {

using VertexPair = std::pair<int, int>;

// Undirected simple graph on vertices 0..n-1. Immutable after construction.
// Edges are stored canonically (min endpoint first, sorted), so two graphs
// with the same edge set compare equal.
class Graph {
public:
    Graph() = default;
    Graph(int n, std::vector<VertexPair> edges);

    int vertex_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<VertexPair>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }
    bool has_edge(int u, int v) const;

    static Graph complete(int n);
    static Graph empty(int n) { return Graph(n, {}); }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    int n_ = 0;
    std::vector<VertexPair> edges_;
    std::vector<std::vector<int>> adj_;
};

// Bijection on 0..n-1, stored as the image array.
class Permutation {
public:
    explicit Permutation(std::vector<int> mapping);
    static Permutation identity(int n);

    int size() const { return static_cast<int>(mapping_.size()); }
    int operator()(int i) const { return mapping_[i]; }
    const std::vector<int>& mapping() const { return mapping_; }

    Permutation inverse() const;
    // (*this) o inner: first apply inner, then this
    Permutation compose_after(const Permutation& inner) const;

    friend bool operator==(const Permutation& a, const Permutation& b) {
        return a.mapping_ == b.mapping_;
    }

private:
    std::vector<int> mapping_;
};

// Vertex -> community-id map with every community nonempty.
class CommunityLabeling {
public:
    CommunityLabeling(std::vector<int> labels, int community_count);
    // Vertices 0..n/c-1 get label 0, the next block label 1, and so on.
    static CommunityLabeling equal_blocks(int n, int communities);

    int size() const { return static_cast<int>(labels_.size()); }
    int community_count() const { return communities_; }
    int label(int v) const { return labels_[v]; }
    const std::vector<int>& labels() const { return labels_; }
    const std::vector<std::vector<int>>& members() const { return members_; }
    bool equal_sizes() const;

    // Labeling of the image graph: the label of pi(i) is the label of i.
    CommunityLabeling permuted(const Permutation& pi) const;

    friend bool operator==(const CommunityLabeling& a, const CommunityLabeling& b) {
        return a.communities_ == b.communities_ && a.labels_ == b.labels_;
    }

private:
    std::vector<int> labels_;
    int communities_ = 0;
    std::vector<std::vector<int>> members_;
};

// Symmetric edge difference split into same-community and cross-community
// pairs. The two parts are disjoint by construction.
struct EdgeDifference {
    std::vector<VertexPair> intra;
    std::vector<VertexPair> inter;
};

Graph apply_permutation(const Graph& g, const Permutation& phi);

Graph intersect(const Graph& g1, const Graph& g2);

// Pairs that are edges in exactly one of E(g1) and phi(E(g2)), classified by
// the endpoint labels.
EdgeDifference symmetric_edge_difference(const Graph& g1, const Graph& g2,
                                         const Permutation& phi,
                                         const CommunityLabeling& labels);

// Degree-0 vertices grouped by community label.
std::vector<std::vector<int>> isolated_vertices(const Graph& g,
                                                const CommunityLabeling& labels);

bool is_community_preserving(const Permutation& phi, const CommunityLabeling& labels);

// phi maps vertices labeled by `from` onto vertices labeled by `to`.
bool is_community_preserving(const Permutation& phi, const CommunityLabeling& from,
                             const CommunityLabeling& to);

} // namespace netanon
