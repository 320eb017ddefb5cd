#include "netanon/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "netanon/errors.hpp"

namespace netanon {

namespace {

double class_constant(double rate, double s1, double s2) {
    double miss = (1.0 - s1) * (1.0 - s2);
    double num = rate * miss;
    double den = 1.0 - rate + num;
    if (den <= 0.0) return 1.0; // rate == 1 and miss == 0: the class cannot mismatch anyway
    return num / den;
}

} // namespace

MapConstants map_constants(double p, double q, double s1, double s2) {
    for (double v : {p, q, s1, s2})
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("map_constants: inputs must lie in [0,1]");
    MapConstants c;
    c.c1 = class_constant(p, s1, s2);
    c.c2 = class_constant(q, s1, s2);
    c.in_forbidden = c.c1 == 0.0;
    c.out_forbidden = c.c2 == 0.0;
    c.w_in = c.in_forbidden ? 0.0 : -std::log(c.c1);
    c.w_out = c.out_forbidden ? 0.0 : -std::log(c.c2);
    return c;
}

bool score_less(const MapScore& a, const MapScore& b) {
    if (a.forbidden != b.forbidden) return a.forbidden < b.forbidden;
    return a.weighted < b.weighted;
}

bool score_equal(const MapScore& a, const MapScore& b) {
    return a.forbidden == b.forbidden && a.weighted == b.weighted;
}

MapScore map_log_score(const Graph& g1, const Graph& anonymized, const CommunityLabeling& l1,
                       const CommunityLabeling& l2, const Permutation& phi,
                       const MapConstants& constants) {
    const int n = g1.vertex_count();
    if (anonymized.vertex_count() != n || phi.size() != n || l1.size() != n || l2.size() != n)
        throw std::invalid_argument("map_log_score: size mismatch");
    if (!is_community_preserving(phi, l1, l2))
        throw std::invalid_argument("map_log_score: phi does not preserve communities");

    MapScore score;
    Permutation inv = phi.inverse();
    for (const auto& [u, v] : g1.edges()) {
        if (!anonymized.has_edge(phi(u), phi(v))) {
            if (l1.label(u) == l1.label(v))
                ++score.intra;
            else
                ++score.inter;
        }
    }
    for (const auto& [x, y] : anonymized.edges()) {
        if (!g1.has_edge(inv(x), inv(y))) {
            if (l2.label(x) == l2.label(y))
                ++score.intra;
            else
                ++score.inter;
        }
    }
    score.forbidden = (constants.in_forbidden ? score.intra : 0) +
                      (constants.out_forbidden ? score.inter : 0);
    score.weighted = (constants.in_forbidden ? 0.0 : constants.w_in * score.intra) +
                     (constants.out_forbidden ? 0.0 : constants.w_out * score.inter);
    return score;
}

std::vector<Permutation> brute_force_map(const Graph& g1, const Graph& anonymized,
                                         const CommunityLabeling& l1,
                                         const CommunityLabeling& l2,
                                         const MapConstants& constants) {
    const int n = g1.vertex_count();
    if (anonymized.vertex_count() != n || l1.size() != n || l2.size() != n)
        throw std::invalid_argument("brute_force_map: size mismatch");
    if (l1.community_count() != l2.community_count())
        throw std::invalid_argument("brute_force_map: community count mismatch");
    const int communities = l1.community_count();
    double candidates = 1.0;
    for (int k = 0; k < communities; ++k) {
        if (l1.members()[k].size() != l2.members()[k].size())
            throw std::invalid_argument("brute_force_map: community sizes differ");
        for (std::size_t i = 2; i <= l1.members()[k].size(); ++i)
            candidates *= static_cast<double>(i);
    }
    if (candidates > 1e7)
        throw CapacityError("brute_force_map: candidate count exceeds enumeration guard");

    std::vector<int> mapping(n, -1);
    std::vector<std::vector<int>> targets(communities);
    for (int k = 0; k < communities; ++k) {
        targets[k] = l2.members()[k];
        std::sort(targets[k].begin(), targets[k].end());
    }

    std::vector<Permutation> best;
    MapScore best_score;
    bool have_best = false;

    // Odometer over per-community bijections; each level enumerates the
    // permutations of one community's target list.
    auto descend = [&](auto&& self, int k) -> void {
        if (k == communities) {
            Permutation phi{std::vector<int>(mapping)};
            MapScore s = map_log_score(g1, anonymized, l1, l2, phi, constants);
            if (!have_best || score_less(s, best_score)) {
                best_score = s;
                best.clear();
                best.push_back(std::move(phi));
                have_best = true;
            } else if (score_equal(s, best_score)) {
                best.push_back(std::move(phi));
            }
            return;
        }
        const auto& sources = l1.members()[k];
        std::vector<int> perm = targets[k];
        do {
            for (std::size_t i = 0; i < sources.size(); ++i) mapping[sources[i]] = perm[i];
            self(self, k + 1);
        } while (std::next_permutation(perm.begin(), perm.end()));
    };
    descend(descend, 0);
    return best;
}

AutomorphismConfusion automorphism_confusion(const Graph& g, const CommunityLabeling& labels) {
    auto isolated = isolated_vertices(g, labels);
    AutomorphismConfusion out;
    for (const auto& community : isolated) {
        for (std::size_t i = 2; i <= community.size(); ++i) {
            out.count_bound *= static_cast<double>(i);
            out.log2_count_bound += std::log2(static_cast<double>(i));
        }
        for (std::size_t i = 0; i + 1 < community.size(); ++i) {
            std::vector<int> m(g.vertex_count());
            for (int v = 0; v < g.vertex_count(); ++v) m[v] = v;
            std::swap(m[community[i]], m[community[i + 1]]);
            out.witnesses.emplace_back(std::move(m));
        }
    }
    return out;
}

bool AttackResult::is_seed(int u) const {
    for (const auto& [su, sv] : seeds)
        if (su == u) return true;
    return false;
}

AttackResult pgm_attack(const Graph& g1, const Graph& anonymized,
                        const std::vector<VertexPair>& seeds, const PgmParams& params,
                        const CommunityLabeling* l1, const CommunityLabeling* l2) {
    const int n = g1.vertex_count();
    if (anonymized.vertex_count() != n)
        throw std::invalid_argument("pgm_attack: size mismatch");
    if (params.mark_threshold < 2)
        throw std::invalid_argument("pgm_attack: mark threshold must be at least 2");
    if (params.community_constrained && (l1 == nullptr || l2 == nullptr))
        throw std::invalid_argument("pgm_attack: community constraint needs labelings");

    AttackResult result;
    result.mapping.assign(n, -1);
    result.seeds = seeds;
    result.algorithm = "pgm";
    result.params = params;

    std::vector<char> target_used(n, 0);
    for (const auto& [u, v] : seeds) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw std::invalid_argument("pgm_attack: seed out of range");
        if (result.mapping[u] != -1 || target_used[v])
            throw std::invalid_argument("pgm_attack: duplicate or conflicting seeds");
        if (params.community_constrained && l1->label(u) != l2->label(v))
            throw std::invalid_argument("pgm_attack: seed crosses communities");
        result.mapping[u] = v;
        target_used[v] = 1;
    }

    const int r = params.mark_threshold;
    std::unordered_map<std::uint64_t, int> marks;
    std::deque<std::uint64_t> ready; // FIFO of pairs that reached r marks

    auto spread = [&](int u, int v) {
        for (int nu : g1.neighbors(u)) {
            if (result.mapping[nu] != -1) continue;
            for (int nv : anonymized.neighbors(v)) {
                if (target_used[nv]) continue;
                if (params.community_constrained && l1->label(nu) != l2->label(nv)) continue;
                std::uint64_t key = static_cast<std::uint64_t>(nu) * n + nv;
                int& count = marks[key];
                if (count >= r) continue;
                if (++count == r) ready.push_back(key);
            }
        }
    };

    for (const auto& [u, v] : seeds) spread(u, v);
    while (!ready.empty()) {
        std::uint64_t key = ready.front();
        ready.pop_front();
        int u = static_cast<int>(key / n);
        int v = static_cast<int>(key % n);
        if (result.mapping[u] != -1 || target_used[v]) continue; // endpoint taken, skip
        result.mapping[u] = v;
        target_used[v] = 1;
        spread(u, v);
    }

    for (int u = 0; u < n; ++u)
        if (result.mapping[u] != -1) ++result.mapped_count;
    return result;
}

AttackMetrics evaluate_attack(const AttackResult& result, const Permutation& truth) {
    if (truth.size() != static_cast<int>(result.mapping.size()))
        throw std::invalid_argument("evaluate_attack: size mismatch");
    std::unordered_set<int> seed_sources;
    for (const auto& [u, v] : result.seeds) seed_sources.insert(u);
    AttackMetrics m;
    for (int u = 0; u < truth.size(); ++u) {
        if (result.mapping[u] == -1) continue;
        ++m.mapped_count;
        if (seed_sources.count(u)) continue;
        ++m.evaluated;
        if (result.mapping[u] != truth(u)) ++m.incorrect;
    }
    m.error_rate = m.evaluated > 0 ? static_cast<double>(m.incorrect) / m.evaluated : 0.0;
    return m;
}

} // namespace netanon
