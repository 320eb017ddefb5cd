#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "netanon/community.hpp"
#include "netanon/graph.hpp"
#include "netanon/rng.hpp"
#include "netanon/synth.hpp"

using namespace netanon;

namespace {

// two disjoint 5-cliques on vertices 0-4 and 5-9
Graph two_cliques() {
    std::vector<VertexPair> edges;
    for (int base : {0, 5})
        for (int i = 0; i < 5; ++i)
            for (int j = i + 1; j < 5; ++j) edges.emplace_back(base + i, base + j);
    return Graph(10, std::move(edges));
}

Graph random_graph(int n, double p, Rng& rng) {
    std::vector<VertexPair> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.bernoulli(p)) edges.emplace_back(i, j);
    return Graph(n, std::move(edges));
}

} // namespace

TEST_CASE("detect_communities") {
    SUBCASE("two disjoint cliques separate exactly") {
        DetectedPartition part = detect_communities(two_cliques(), 1);
        CHECK(part.labeling.community_count() == 2);
        for (int i = 0; i < 5; ++i) {
            CHECK(part.labeling.label(i) == part.labeling.label(0));
            CHECK(part.labeling.label(5 + i) == part.labeling.label(5));
        }
        CHECK(part.labeling.label(0) != part.labeling.label(5));
        CHECK(part.modularity == doctest::Approx(0.5));
    }
    SUBCASE("complete graph collapses to one community") {
        DetectedPartition part = detect_communities(Graph::complete(12), 1);
        CHECK(part.labeling.community_count() == 1);
    }
    SUBCASE("edgeless graph: singletons with modularity 0") {
        DetectedPartition part = detect_communities(Graph::empty(6), 1);
        CHECK(part.labeling.community_count() == 6);
        CHECK(part.modularity == 0.0);
    }
    SUBCASE("deterministic in the seed") {
        Rng rng(8);
        Graph g = random_graph(60, 0.1, rng);
        DetectedPartition p1 = detect_communities(g, 5);
        DetectedPartition p2 = detect_communities(g, 5);
        CHECK(p1.labeling.labels() == p2.labeling.labels());
        CHECK(p1.modularity == p2.modularity);
    }
    SUBCASE("well-separated SBM samples are recovered at 95%") {
        auto params = SbmParams::from_rates(1000, 2, 20.0, 1.0);
        for (int trial = 0; trial < 20; ++trial) {
            auto [g, planted] = sample_sbm(params, 300 + trial);
            DetectedPartition part = detect_communities(g, 42);
            CHECK(label_agreement(part.labeling, planted) >= 0.95);
        }
    }
    SUBCASE("never below the singleton partition's modularity") {
        Rng rng(15);
        for (int trial = 0; trial < 10; ++trial) {
            Graph g = random_graph(40, 0.15, rng);
            if (g.edge_count() == 0) continue;
            DetectedPartition part = detect_communities(g, trial);
            std::vector<int> singleton(40);
            for (int i = 0; i < 40; ++i) singleton[i] = i;
            CHECK(part.modularity >=
                  modularity(g, CommunityLabeling(singleton, 40)) - 1e-12);
            CHECK(part.modularity == doctest::Approx(modularity(g, part.labeling)));
        }
    }
}

TEST_CASE("modularity") {
    SUBCASE("single community is zero") {
        Rng rng(4);
        Graph g = random_graph(20, 0.3, rng);
        CHECK(modularity(g, CommunityLabeling(std::vector<int>(20, 0), 1)) ==
              doctest::Approx(0.0));
    }
    SUBCASE("correctly split disjoint cliques score 0.5") {
        CHECK(modularity(two_cliques(), CommunityLabeling::equal_blocks(10, 2)) ==
              doctest::Approx(0.5));
    }
    SUBCASE("edgeless graph scores 0 by convention") {
        CHECK(modularity(Graph::empty(5), CommunityLabeling(std::vector<int>(5, 0), 1)) == 0.0);
    }
    SUBCASE("matches a brute-force edge-classification oracle") {
        Rng rng(26);
        for (int trial = 0; trial < 20; ++trial) {
            Graph g = random_graph(15, 0.3, rng);
            if (g.edge_count() == 0) continue;
            std::vector<int> labels(15);
            for (int i = 0; i < 15; ++i) labels[i] = static_cast<int>(rng.below(3));
            for (int c = 0; c < 3; ++c) labels[c] = c; // keep all labels in use
            CommunityLabeling L(labels, 3);
            double m = static_cast<double>(g.edge_count());
            double q = 0.0;
            for (int c = 0; c < 3; ++c) {
                double ec = 0.0, dc = 0.0;
                for (const auto& [u, v] : g.edges())
                    if (labels[u] == c && labels[v] == c) ec += 1.0;
                for (int v = 0; v < 15; ++v)
                    if (labels[v] == c) dc += static_cast<double>(g.degree(v));
                q += ec / m - (dc / (2.0 * m)) * (dc / (2.0 * m));
            }
            CHECK(modularity(g, L) == doctest::Approx(q).epsilon(1e-12));
            CHECK(modularity(g, L) >= -0.5);
            CHECK(modularity(g, L) <= 1.0);
        }
    }
}

TEST_CASE("jaccard_index") {
    CHECK(jaccard_index({1, 2, 3}, {1, 2, 3}) == 1.0);
    CHECK(jaccard_index({1, 2}, {3, 4}) == 0.0);
    CHECK(jaccard_index({1, 2, 3}, {2, 3, 4}) == doctest::Approx(0.5));
    CHECK(jaccard_index({}, {}) == 1.0);
    CHECK(jaccard_index({}, {1}) == 0.0);
    SUBCASE("symmetric, and 1 only for equal sets") {
        Rng rng(33);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<int> a, b;
            for (int v = 0; v < 12; ++v) {
                if (rng.bernoulli(0.5)) a.push_back(v);
                if (rng.bernoulli(0.5)) b.push_back(v);
            }
            double j = jaccard_index(a, b);
            CHECK(j == jaccard_index(b, a));
            CHECK((j == 1.0) == (a == b));
        }
    }
}

TEST_CASE("match_communities") {
    auto params = SbmParams::from_rates(200, 2, 25.0, 1.0);
    auto [g, planted] = sample_sbm(params, 6);
    DetectedPartition base = detect_communities(g, 9);

    SUBCASE("self-match gives all Jaccard 1") {
        CommunityComparison cmp = match_communities(base, base);
        CHECK(cmp.base_count == cmp.other_count);
        for (const auto& m : cmp.matches) CHECK(m.jaccard == 1.0);
        for (std::size_t e = 0; e < cmp.epsilons.size(); ++e)
            CHECK(cmp.preserved[e] == cmp.base_count);
    }
    SUBCASE("splitting one community in half drops its Jaccard to 1/2") {
        // base: blocks of 100; other: community 0 split into two halves
        DetectedPartition blocks{CommunityLabeling::equal_blocks(200, 2), 0.0, 4};
        std::vector<int> split(200);
        for (int v = 0; v < 200; ++v) split[v] = v < 50 ? 2 : (v < 100 ? 0 : 1);
        DetectedPartition other{CommunityLabeling(split, 3), 0.0, 4};
        CommunityComparison cmp = match_communities(blocks, other);
        REQUIRE(cmp.matches.size() == 2);
        CHECK(cmp.matches[0].jaccard == doctest::Approx(0.5));
        CHECK(cmp.matches[1].jaccard == 1.0);
    }
    SUBCASE("preservation counts are monotone in epsilon") {
        Graph sub = subsample_edges(g, 0.5, 77);
        DetectedPartition other = detect_communities(sub, 9);
        CommunityComparison cmp =
            match_communities(base, other, {0.0, 0.05, 0.1, 0.15, 0.3, 1.0});
        for (std::size_t e = 1; e < cmp.epsilons.size(); ++e)
            CHECK(cmp.preserved[e] >= cmp.preserved[e - 1]);
        for (const auto& m : cmp.matches) {
            CHECK(m.jaccard >= 0.0);
            CHECK(m.jaccard <= 1.0);
        }
        // eps = 1 admits everything with a nonempty best match
        CHECK(cmp.preserved.back() == cmp.base_count);
    }
    SUBCASE("preservation at eps = 0 counts exact reproductions") {
        DetectedPartition blocks{CommunityLabeling::equal_blocks(20, 2), 0.0, 4};
        std::vector<int> moved(20);
        for (int v = 0; v < 20; ++v) moved[v] = v < 10 ? 0 : 1;
        moved[19] = 0; // perturb community 1
        DetectedPartition other{CommunityLabeling(moved, 2), 0.0, 4};
        CommunityComparison cmp = match_communities(blocks, other, {0.0});
        CHECK(cmp.preserved[0] == 0); // both base communities are perturbed
        CommunityComparison self = match_communities(blocks, blocks, {0.0});
        CHECK(self.preserved[0] == 2);
    }
    SUBCASE("size filter excludes small communities") {
        std::vector<int> labels(20, 0);
        labels[18] = 1;
        labels[19] = 1; // community of size 2 < 4
        DetectedPartition part{CommunityLabeling(labels, 2), 0.0, 4};
        CommunityComparison cmp = match_communities(part, part);
        CHECK(cmp.base_count == 1);
        CHECK(cmp.matches.size() == 1);
        CHECK(cmp.base_min == 18);
        CHECK(cmp.base_max == 18);
    }
}

TEST_CASE("label_agreement") {
    auto blocks = CommunityLabeling::equal_blocks(100, 2);

    SUBCASE("identity and global swap both score 1") {
        CHECK(label_agreement(blocks, blocks) == 1.0);
        std::vector<int> swapped(100);
        for (int v = 0; v < 100; ++v) swapped[v] = 1 - blocks.label(v);
        CHECK(label_agreement(CommunityLabeling(swapped, 2), blocks) == 1.0);
    }
    SUBCASE("random labels against planted average near 1/2") {
        Rng rng(61);
        double total = 0.0;
        const int trials = 200;
        for (int trial = 0; trial < trials; ++trial) {
            std::vector<int> labels(100);
            for (int v = 0; v < 100; ++v) labels[v] = static_cast<int>(rng.below(2));
            labels[0] = 0;
            labels[1] = 1;
            total += label_agreement(CommunityLabeling(labels, 2), blocks);
        }
        // best-of-two-bijections mean is slightly above 0.5 at n = 100
        CHECK(total / trials > 0.45);
        CHECK(total / trials < 0.60);
    }
    SUBCASE("invariant under bijective relabeling of either side") {
        Rng rng(72);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<int> la(60), lb(60);
            for (int v = 0; v < 60; ++v) {
                la[v] = static_cast<int>(rng.below(3));
                lb[v] = static_cast<int>(rng.below(3));
            }
            for (int c = 0; c < 3; ++c) la[c] = lb[c] = c;
            CommunityLabeling A(la, 3), B(lb, 3);
            double base = label_agreement(A, B);
            std::vector<int> rot(60);
            for (int v = 0; v < 60; ++v) rot[v] = (la[v] + 1) % 3;
            CHECK(label_agreement(CommunityLabeling(rot, 3), B) == doctest::Approx(base));
            CHECK(label_agreement(B, A) == doctest::Approx(base));
        }
    }
    SUBCASE("different community counts still compare") {
        std::vector<int> fine(12);
        for (int v = 0; v < 12; ++v) fine[v] = v / 3; // 4 communities
        auto coarse = CommunityLabeling::equal_blocks(12, 2);
        double agreement = label_agreement(CommunityLabeling(fine, 4), coarse);
        CHECK(agreement == doctest::Approx(0.5)); // best bijection keeps 2 of 4 blocks
    }
}
