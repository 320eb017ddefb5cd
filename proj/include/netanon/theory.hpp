#pragma once

#include <vector>

#include "netanon/graph.hpp"
#include "netanon/synth.hpp"

namespace netanon {

// Point in the threshold parameter space. `communities` is the fixed C for
// the constant-community statements; for the sublinear regime C is n^beta
// evaluated at a stated n.
struct RegionQuery {
    double a = 0.0;
    double b = 0.0;
    double communities = 2.0;
    double s1 = 1.0;
    double s2 = 1.0;
    double t = 1.0;
    double alpha = 0.0;
    double beta = 0.0;

    void validate() const;
};

// Verdict for a strict-inequality threshold. `margin` is the signed distance
// from the boundary; the verdict is true exactly when margin > 0.
struct Verdict {
    bool holds = false;
    double margin = 0.0;
};

struct RegionVerdict {
    bool cd_possible = false;
    bool da_impossible = false;
    bool ach_possible = false;
    double cd_margin = 0.0;
    double converse_margin = 0.0;
    double ach_margin = 0.0;
    bool safe = false;
};

struct SubsampleWindow {
    bool nonempty = false;
    double t_min = 0.0;
    double t_max = 0.0;
    // Two-community shortcut predicate ((a-b)/(a+b))^2 + (1-s1)^2 > 1.
    bool two_community_predicate = false;
};

struct AnonymityCertificate {
    std::vector<long long> isolated_per_community; // X_k on the intersection
    long long total_isolated = 0;
    // Per-vertex uncertainty for an isolated vertex of community k: log2(X_k),
    // zero when X_k <= 1.
    std::vector<double> bits_per_community;
    // log2 of prod_k X_k!, a lower bound on the community-preserving
    // automorphisms of the intersection graph.
    double log2_automorphism_bound = 0.0;
};

// Closed-form expected isolated-vertex count per community,
// n' (1-p)^(n'-1) (1-q)^((C-1)n').
double expected_isolated(const SbmParams& params);

// Deanonymization impossible: (a+(C-1)b) s1 s2 t / C < 1 - alpha.
Verdict converse_verdict(const RegionQuery& q);

// Exact deanonymization possible: (a+(C-1)b) s1 s2 t / C > 2.
Verdict achievability_verdict(const RegionQuery& q);

// Exact community recovery possible: sqrt(a r) - sqrt(b r) > sqrt(C), where
// r is the effective edge retention of the released graph.
Verdict community_recovery_verdict(double a, double b, double communities, double retention);

// Community recovery possible and exact deanonymization impossible (alpha=0).
RegionVerdict safe_region_query(const RegionQuery& q);

// Interval of publisher subsampling probabilities t in (0,1] for which the
// released graph is safe; empty when no such t exists.
SubsampleWindow subsample_window(double a, double b, double communities, double s1, double s2);

// Converse with C = n^beta communities: threshold shifts to 1 - alpha - beta.
Verdict sublinear_converse_verdict(const RegionQuery& q);

// Two-community signed distance from the exact-deanonymization threshold:
// (a+b) s1 s2 t / 2 - 1.
double offset_delta(double a, double b, double s1, double s2, double t);

// Publisher-side certificate from the aligned pair: isolated-vertex counts of
// g1 ∩ g2 per community with the implied uncertainty bounds.
AnonymityCertificate certify_anonymity(const Graph& g1, const Graph& g2,
                                       const CommunityLabeling& labels);

} // namespace netanon
