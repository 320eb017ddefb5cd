#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace netanon {

// splitmix64 step, used to derive independent sub-stream seeds from a root
// seed. Derived seeds are stable across platforms.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seeded generator wrapping std::mt19937_64. All variate conversions are done
// in-house (53-bit doubles, rejection sampling for bounded ints) so that a
// given seed replays the same sequence on any standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0,1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    // uniform in [0, bound), unbiased
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

    // Number of failures before the next success in a Bernoulli(p) stream.
    // Lets samplers jump directly between retained items.
    std::uint64_t geometric_skip(double p) {
        if (p >= 1.0) return 0;
        if (p <= 0.0) return std::numeric_limits<std::uint64_t>::max();
        double u = next_double();
        double g = std::floor(std::log1p(-u) / std::log1p(-p));
        if (g >= 9.0e18) return std::numeric_limits<std::uint64_t>::max();
        return static_cast<std::uint64_t>(g);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

// Visits the indices of a length-m Bernoulli(p) selection in increasing
// order. Cost is proportional to the number of selected indices.
template <typename F>
void sample_bernoulli_indices(std::uint64_t m, double p, Rng& rng, F&& visit) {
    if (m == 0 || p <= 0.0) return;
    if (p >= 1.0) {
        for (std::uint64_t i = 0; i < m; ++i) visit(i);
        return;
    }
    std::uint64_t i = rng.geometric_skip(p);
    while (i < m) {
        visit(i);
        std::uint64_t gap = rng.geometric_skip(p);
        if (gap >= m - i) break;
        i += gap + 1;
    }
}

} // namespace netanon
