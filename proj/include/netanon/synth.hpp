#pragma once

#include <cstdint>
#include <utility>

#include "netanon/graph.hpp"

namespace netanon {

// Planted-partition parameters. Rates (a, b) are converted at construction
// with p = a ln(n)/n, q = b ln(n)/n; raw probabilities are accepted as-is.
struct SbmParams {
    int n = 0;
    int communities = 1;
    double p = 0.0;
    double q = 0.0;

    static SbmParams from_rates(int n, int communities, double a, double b);
    static SbmParams from_probabilities(int n, int communities, double p, double q);

    int block_size() const { return n / communities; }
    void validate() const;
};

struct SampleParams {
    double s1 = 1.0; // attacker-side edge retention
    double s2 = 1.0; // sensitive-side edge retention
    double t = 1.0;  // publisher subsampling applied on top of s2

    void validate() const;
};

// A full synthetic instance: ground graph, the two subsamples, the true
// permutation and the released graph pi(g2). g2 already includes the
// publisher subsampling t, so anonymized == apply_permutation(g2, pi).
struct CorrelatedPair {
    Graph ground;
    Graph g1;
    Graph g2;
    CommunityLabeling labeling;
    Permutation pi;
    Graph anonymized;
    SbmParams sbm;
    SampleParams sample;
    std::uint64_t seed = 0;
};

// Equal-size blocks; each intra pair is an edge w.p. p, each inter pair w.p. q.
std::pair<Graph, CommunityLabeling> sample_sbm(const SbmParams& params, std::uint64_t seed);

CorrelatedPair sample_correlated_pair(const SbmParams& params, const SampleParams& sample,
                                      std::uint64_t seed);

// Keeps each edge independently with probability t.
Graph subsample_edges(const Graph& g, double t, std::uint64_t seed);

// Removes round(fraction * |E|) uniformly chosen edges and replaces them with
// uniformly chosen distinct non-edges of the input. Edge count is preserved.
Graph rewire_edges(const Graph& g, double fraction, std::uint64_t seed);

// Uniform random permutation and the relabeled graph.
std::pair<Permutation, Graph> anonymize(const Graph& g, std::uint64_t seed);

} // namespace netanon
