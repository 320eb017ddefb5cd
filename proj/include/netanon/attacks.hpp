#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netanon/graph.hpp"

namespace netanon {

// Weights of the posterior objective. A zero c-value means the corresponding
// mismatch class has probability zero; those mismatches are tracked as a
// separate lexicographic level instead of using floating infinities.
struct MapConstants {
    double c1 = 0.0;
    double c2 = 0.0;
    double w_in = 0.0;  // -log c1, finite part only
    double w_out = 0.0; // -log c2, finite part only
    bool in_forbidden = false;  // c1 == 0
    bool out_forbidden = false; // c2 == 0
};

MapConstants map_constants(double p, double q, double s1, double s2);

// Extended-real score: lexicographic (forbidden-class mismatches, weighted
// finite part). Raw symmetric-difference counts are kept for exact ties.
struct MapScore {
    long long forbidden = 0;
    double weighted = 0.0;
    long long intra = 0;
    long long inter = 0;
};

bool score_less(const MapScore& a, const MapScore& b);
bool score_equal(const MapScore& a, const MapScore& b);

// Negative log posterior of a candidate mapping phi (g1 vertex -> anonymized
// vertex), up to a constant. Lower is more likely. phi must preserve the
// community structure w.r.t. (l1, l2).
MapScore map_log_score(const Graph& g1, const Graph& anonymized, const CommunityLabeling& l1,
                       const CommunityLabeling& l2, const Permutation& phi,
                       const MapConstants& constants);

// Exhaustive MAP: all community-preserving permutations attaining the minimum
// score. Guarded: the number of candidates must not exceed 10^7.
std::vector<Permutation> brute_force_map(const Graph& g1, const Graph& anonymized,
                                         const CommunityLabeling& l1,
                                         const CommunityLabeling& l2,
                                         const MapConstants& constants);

struct AutomorphismConfusion {
    // prod_k X_k!, a lower bound on the community-preserving automorphisms of
    // the graph; +inf when it overflows a double.
    double count_bound = 1.0;
    double log2_count_bound = 0.0;
    // Transpositions of isolated same-community vertices; each is an
    // automorphism witness.
    std::vector<Permutation> witnesses;
};

AutomorphismConfusion automorphism_confusion(const Graph& g, const CommunityLabeling& labels);

struct PgmParams {
    int mark_threshold = 2; // r
    bool community_constrained = false;
};

struct AttackResult {
    // mapping[u] is the anonymized vertex matched to g1 vertex u, -1 if none.
    std::vector<int> mapping;
    std::vector<VertexPair> seeds;
    std::string algorithm;
    PgmParams params;
    int mapped_count = 0;

    bool is_seed(int u) const;
};

// Seeded percolation graph matching. Matched pairs spread one mark to every
// neighbor pair; an unmatched pair is matched when its marks reach the
// threshold r, first-to-threshold with FIFO tie-breaking. Pairs whose
// endpoints are taken by the time they are popped are skipped.
AttackResult pgm_attack(const Graph& g1, const Graph& anonymized,
                        const std::vector<VertexPair>& seeds, const PgmParams& params,
                        const CommunityLabeling* l1 = nullptr,
                        const CommunityLabeling* l2 = nullptr);

struct AttackMetrics {
    int mapped_count = 0;
    int evaluated = 0; // mapped, excluding seeds
    int incorrect = 0;
    double error_rate = 0.0; // incorrect / evaluated, 0/0 == 0
};

AttackMetrics evaluate_attack(const AttackResult& result, const Permutation& truth);

} // namespace netanon
