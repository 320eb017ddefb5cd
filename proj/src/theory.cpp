#include "netanon/theory.hpp"

#include <algorithm>
#include <cmath>

#include "netanon/errors.hpp"

namespace netanon {

namespace {

double normalized_rate(const RegionQuery& q) {
    return (q.a + (q.communities - 1.0) * q.b) * q.s1 * q.s2 * q.t / q.communities;
}

} // namespace

void RegionQuery::validate() const {
    for (double v : {s1, s2, t})
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("RegionQuery: probabilities must lie in [0,1]");
    if (!(a >= b && b >= 0.0)) throw ConfigError("RegionQuery: requires a >= b >= 0");
    if (!(communities >= 1.0)) throw ConfigError("RegionQuery: requires C >= 1");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw ConfigError("RegionQuery: alpha must lie in [0,1)");
    if (!(beta >= 0.0 && beta < 1.0)) throw ConfigError("RegionQuery: beta must lie in [0,1)");
}

double expected_isolated(const SbmParams& params) {
    params.validate();
    if (params.n % params.communities != 0)
        throw ConfigError("expected_isolated: community count must divide n");
    double block = params.block_size();
    return block * std::pow(1.0 - params.p, block - 1.0) *
           std::pow(1.0 - params.q, (params.communities - 1.0) * block);
}

Verdict converse_verdict(const RegionQuery& q) {
    q.validate();
    double margin = (1.0 - q.alpha) - normalized_rate(q);
    return {margin > 0.0, margin};
}

Verdict achievability_verdict(const RegionQuery& q) {
    q.validate();
    double margin = normalized_rate(q) - 2.0;
    return {margin > 0.0, margin};
}

Verdict community_recovery_verdict(double a, double b, double communities, double retention) {
    if (!(retention >= 0.0 && retention <= 1.0))
        throw ConfigError("community_recovery_verdict: retention must lie in [0,1]");
    if (!(a >= 0.0 && b >= 0.0 && communities >= 1.0))
        throw ConfigError("community_recovery_verdict: invalid parameters");
    double margin = std::sqrt(a * retention) - std::sqrt(b * retention) - std::sqrt(communities);
    return {margin > 0.0, margin};
}

RegionVerdict safe_region_query(const RegionQuery& q) {
    q.validate();
    RegionQuery exact = q;
    exact.alpha = 0.0;
    Verdict conv = converse_verdict(exact);
    Verdict ach = achievability_verdict(exact);
    Verdict cd = community_recovery_verdict(q.a, q.b, q.communities, q.s2 * q.t);
    RegionVerdict out;
    out.cd_possible = cd.holds;
    out.cd_margin = cd.margin;
    out.da_impossible = conv.holds;
    out.converse_margin = conv.margin;
    out.ach_possible = ach.holds;
    out.ach_margin = ach.margin;
    out.safe = out.cd_possible && out.da_impossible;
    return out;
}

SubsampleWindow subsample_window(double a, double b, double communities, double s1, double s2) {
    if (!(a >= b && b >= 0.0)) throw ConfigError("subsample_window: requires a >= b >= 0");
    if (!(s1 >= 0.0 && s1 <= 1.0 && s2 >= 0.0 && s2 <= 1.0))
        throw ConfigError("subsample_window: probabilities must lie in [0,1]");
    if (!(communities >= 1.0)) throw ConfigError("subsample_window: requires C >= 1");

    SubsampleWindow out;
    if (communities == 2.0) {
        double ratio = (a + b) > 0.0 ? (a - b) / (a + b) : 0.0;
        out.two_community_predicate = ratio * ratio + (1.0 - s1) * (1.0 - s1) > 1.0;
    }

    // Community recovery needs t > C / (s2 (sqrt a - sqrt b)^2); the converse
    // needs t < C / ((a+(C-1)b) s1 s2). Both constraints are monotone in t.
    double root_gap = std::sqrt(a) - std::sqrt(b);
    if (root_gap <= 0.0 || s2 <= 0.0) return out; // recovery impossible at any t
    double t_min = communities / (s2 * root_gap * root_gap);
    double rate = (a + (communities - 1.0) * b) * s1 * s2;
    double t_max = rate > 0.0 ? communities / rate : 1.0;
    t_max = std::min(t_max, 1.0);
    if (t_min < t_max) {
        out.nonempty = true;
        out.t_min = t_min;
        out.t_max = t_max;
    }
    return out;
}

Verdict sublinear_converse_verdict(const RegionQuery& q) {
    q.validate();
    if (q.alpha + q.beta >= 1.0)
        throw ConfigError("sublinear_converse_verdict: alpha + beta must be below 1");
    double margin = (1.0 - q.alpha - q.beta) - normalized_rate(q);
    return {margin > 0.0, margin};
}

double offset_delta(double a, double b, double s1, double s2, double t) {
    return (a + b) * s1 * s2 * t / 2.0 - 1.0;
}

AnonymityCertificate certify_anonymity(const Graph& g1, const Graph& g2,
                                       const CommunityLabeling& labels) {
    Graph common = intersect(g1, g2);
    auto isolated = isolated_vertices(common, labels);
    AnonymityCertificate cert;
    for (const auto& community : isolated) {
        long long count = static_cast<long long>(community.size());
        cert.isolated_per_community.push_back(count);
        cert.total_isolated += count;
        cert.bits_per_community.push_back(count > 1 ? std::log2(static_cast<double>(count)) : 0.0);
        for (long long i = 2; i <= count; ++i)
            cert.log2_automorphism_bound += std::log2(static_cast<double>(i));
    }
    return cert;
}

} // namespace netanon
