#pragma once

#include <cstdint>
#include <vector>

#include "netanon/graph.hpp"

namespace netanon {

struct DetectedPartition {
    CommunityLabeling labeling;
    double modularity = 0.0;
    int min_size_filter = 4;
};

// Two-phase modularity maximization (local moving + aggregation), resolution
// fixed at 1. The vertex visiting order is seeded, so results are
// reproducible.
DetectedPartition detect_communities(const Graph& g, std::uint64_t seed, int min_size_filter = 4);

// Q = sum_c (e_c/m - (d_c/2m)^2); zero on edgeless graphs.
double modularity(const Graph& g, const CommunityLabeling& labels);

// |A∩B| / |A∪B| over sorted vertex lists; J(∅,∅) == 1.
double jaccard_index(const std::vector<int>& a, const std::vector<int>& b);

struct CommunityMatch {
    int base_community = 0;
    int base_size = 0;
    int best_match = -1; // community id in the other partition
    double jaccard = 0.0;
};

struct CommunityComparison {
    std::vector<CommunityMatch> matches; // base communities of size >= filter
    std::vector<double> epsilons;
    std::vector<int> preserved; // count with best Jaccard >= 1-eps, per eps
    int base_count = 0;         // communities of size >= filter
    int other_count = 0;
    int base_min = 0, base_max = 0;
    int other_min = 0, other_max = 0;
};

// Per-base-community best Jaccard match in the other partition, plus
// (1-eps)-preservation counts and size statistics. Matching is independent
// per base community (many-to-one allowed).
CommunityComparison match_communities(const DetectedPartition& base,
                                      const DetectedPartition& other,
                                      const std::vector<double>& epsilons = {0.1, 0.15});

// Fraction of vertices with matching labels under the best label bijection.
// Exact assignment for small label counts, greedy beyond.
double label_agreement(const CommunityLabeling& labels, const CommunityLabeling& truth);

} // namespace netanon
