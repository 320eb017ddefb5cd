#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "netanon/errors.hpp"
#include "netanon/graph.hpp"
#include "netanon/rng.hpp"
#include "netanon/synth.hpp"

using namespace netanon;

TEST_CASE("sample_sbm degenerate probabilities") {
    auto empty = sample_sbm(SbmParams::from_probabilities(20, 2, 0.0, 0.0), 1);
    CHECK(empty.first.edge_count() == 0);

    auto full = sample_sbm(SbmParams::from_probabilities(20, 2, 1.0, 1.0), 1);
    CHECK(full.first == Graph::complete(20));

    CHECK_THROWS_AS(SbmParams::from_probabilities(10, 2, 0.1, 0.5), ConfigError); // q > p
    CHECK_THROWS_AS(sample_sbm(SbmParams::from_probabilities(10, 3, 0.5, 0.1), 1), ConfigError);
}

TEST_CASE("sample_sbm is deterministic in the seed") {
    auto params = SbmParams::from_rates(500, 2, 10.0, 2.0);
    auto g1 = sample_sbm(params, 42);
    auto g2 = sample_sbm(params, 42);
    auto g3 = sample_sbm(params, 43);
    CHECK(g1.first == g2.first);
    CHECK(g1.second == g2.second);
    CHECK_FALSE(g1.first == g3.first);
}

TEST_CASE("sample_sbm intra density passes a binomial mean test") {
    auto params = SbmParams::from_rates(2000, 2, 20.0, 5.0);
    const double intra_pairs_per_sample = 2.0 * (1000.0 * 999.0 / 2.0);
    const double inter_pairs_per_sample = 1000.0 * 1000.0;
    const int samples = 100;
    double intra_edges = 0.0, inter_edges = 0.0;
    for (int i = 0; i < samples; ++i) {
        auto [g, labels] = sample_sbm(params, 1000 + i);
        for (const auto& [u, v] : g.edges()) {
            if (labels.label(u) == labels.label(v))
                intra_edges += 1.0;
            else
                inter_edges += 1.0;
        }
    }
    double n_intra = intra_pairs_per_sample * samples;
    double se_intra = std::sqrt(params.p * (1.0 - params.p) / n_intra);
    CHECK(std::abs(intra_edges / n_intra - params.p) < 3.0 * se_intra);
    double n_inter = inter_pairs_per_sample * samples;
    double se_inter = std::sqrt(params.q * (1.0 - params.q) / n_inter);
    CHECK(std::abs(inter_edges / n_inter - params.q) < 3.0 * se_inter);
}

TEST_CASE("sample_correlated_pair structure") {
    auto params = SbmParams::from_rates(400, 2, 12.0, 3.0);

    SUBCASE("s1 = s2 = 1 reproduces the ground graph") {
        auto pair = sample_correlated_pair(params, SampleParams{1.0, 1.0, 1.0}, 9);
        CHECK(pair.g1 == pair.ground);
        CHECK(pair.g2 == pair.ground);
    }
    SUBCASE("s1 = 0 empties the auxiliary graph") {
        auto pair = sample_correlated_pair(params, SampleParams{0.0, 1.0, 1.0}, 9);
        CHECK(pair.g1.edge_count() == 0);
    }
    SUBCASE("subset chain and anonymization invariant") {
        auto pair = sample_correlated_pair(params, SampleParams{0.6, 0.7, 0.8}, 11);
        for (const auto& [u, v] : pair.g1.edges()) CHECK(pair.ground.has_edge(u, v));
        for (const auto& [u, v] : pair.g2.edges()) CHECK(pair.ground.has_edge(u, v));
        CHECK(pair.anonymized == apply_permutation(pair.g2, pair.pi));
    }
    SUBCASE("joint per-edge retention is s1*s2 within 3 standard errors") {
        const double s1 = 0.7, s2 = 0.5;
        double ground_edges = 0.0, joint = 0.0;
        for (int i = 0; i < 40; ++i) {
            auto pair = sample_correlated_pair(params, SampleParams{s1, s2, 1.0}, 100 + i);
            ground_edges += static_cast<double>(pair.ground.edge_count());
            joint += static_cast<double>(intersect(pair.g1, pair.g2).edge_count());
        }
        REQUIRE(ground_edges > 1e4);
        double p = s1 * s2;
        double se = std::sqrt(p * (1.0 - p) / ground_edges);
        CHECK(std::abs(joint / ground_edges - p) < 3.0 * se);
    }
}

TEST_CASE("subsample_edges") {
    auto [g, labels] = sample_sbm(SbmParams::from_rates(300, 2, 15.0, 5.0), 5);

    CHECK(subsample_edges(g, 1.0, 3) == g);
    CHECK(subsample_edges(g, 0.0, 3).edge_count() == 0);
    CHECK_THROWS_AS(subsample_edges(g, 1.5, 3), ConfigError);

    SUBCASE("kept edges are a subset") {
        Graph sub = subsample_edges(g, 0.4, 17);
        for (const auto& [u, v] : sub.edges()) CHECK(g.has_edge(u, v));
    }
    SUBCASE("edge count passes a binomial mean test over 200 seeds") {
        const double t = 0.35;
        double total = 0.0;
        for (int i = 0; i < 200; ++i)
            total += static_cast<double>(subsample_edges(g, t, 500 + i).edge_count());
        double mean = total / 200.0;
        double expected = t * static_cast<double>(g.edge_count());
        double sigma = std::sqrt(static_cast<double>(g.edge_count()) * t * (1.0 - t) / 200.0);
        CHECK(std::abs(mean - expected) < 3.0 * sigma);
    }
    SUBCASE("two-stage subsampling matches direct sampling in edge density") {
        const double s2 = 0.6, t = 0.5;
        double staged = 0.0, direct = 0.0;
        for (int i = 0; i < 200; ++i) {
            staged += static_cast<double>(
                subsample_edges(subsample_edges(g, s2, 900 + i), t, 2900 + i).edge_count());
            direct += static_cast<double>(subsample_edges(g, s2 * t, 4900 + i).edge_count());
        }
        double m = static_cast<double>(g.edge_count());
        double sigma = std::sqrt(2.0 * m * (s2 * t) * (1.0 - s2 * t) / 200.0);
        CHECK(std::abs(staged / 200.0 - direct / 200.0) < 3.0 * sigma);
    }
}

TEST_CASE("rewire_edges") {
    auto [g, labels] = sample_sbm(SbmParams::from_probabilities(100, 2, 0.2, 0.2), 8);

    CHECK(rewire_edges(g, 0.0, 1) == g);
    CHECK_THROWS_AS(rewire_edges(Graph::complete(6), 0.5, 1), ConfigError);

    SUBCASE("edge count is preserved") {
        for (double fraction : {0.1, 0.3, 0.9}) {
            Graph rewired = rewire_edges(g, fraction, 21);
            CHECK(rewired.edge_count() == g.edge_count());
        }
    }
    SUBCASE("edge-set Jaccard with the original is near (1-f)/(1+f)") {
        const double fraction = 0.3;
        double total = 0.0;
        for (int i = 0; i < 100; ++i) {
            Graph rewired = rewire_edges(g, fraction, 600 + i);
            double common = static_cast<double>(intersect(g, rewired).edge_count());
            double unioned = 2.0 * static_cast<double>(g.edge_count()) - common;
            total += common / unioned;
        }
        double expected = (1.0 - fraction) / (1.0 + fraction); // ~0.538
        CHECK(std::abs(total / 100.0 - expected) < 0.02);
    }
}

TEST_CASE("anonymize") {
    SUBCASE("single vertex") {
        auto [pi, g] = anonymize(Graph::empty(1), 99);
        CHECK(pi == Permutation::identity(1));
        CHECK(g.vertex_count() == 1);
    }
    SUBCASE("output is always isomorphic to the input") {
        auto [g, labels] = sample_sbm(SbmParams::from_rates(100, 2, 8.0, 2.0), 2);
        auto [pi, anon] = anonymize(g, 4);
        CHECK(anon.edge_count() == g.edge_count());
        std::multiset<int> before, after;
        for (int v = 0; v < g.vertex_count(); ++v) {
            before.insert(g.degree(v));
            after.insert(anon.degree(v));
        }
        CHECK(before == after);
    }
    SUBCASE("permutations of 4 vertices are uniform (chi-square over 1e5 seeds)") {
        std::map<std::vector<int>, int> counts;
        const int trials = 100000;
        for (int i = 0; i < trials; ++i) {
            auto [pi, g] = anonymize(Graph::empty(4), 7777 + i);
            ++counts[pi.mapping()];
        }
        CHECK(counts.size() == 24);
        double expected = trials / 24.0;
        double chi2 = 0.0;
        for (const auto& [perm, count] : counts)
            chi2 += (count - expected) * (count - expected) / expected;
        // 99.9th percentile of chi-square with 23 degrees of freedom
        CHECK(chi2 < 49.73);
        double se = std::sqrt((1.0 / 24.0) * (23.0 / 24.0) / trials);
        for (const auto& [perm, count] : counts)
            CHECK(std::abs(static_cast<double>(count) / trials - 1.0 / 24.0) < 4.0 * se);
    }
}
