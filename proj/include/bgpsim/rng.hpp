#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace bgpsim {

/// SplitMix64 step; used for seed mixing because its output is fully
/// specified (no library variance) and it decorrelates sequential inputs.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/** Deterministic RNG for trials. Wraps std::mt19937_64 (whose output
 *  sequence is pinned by the standard) but does its own bounded sampling:
 *  std::uniform_int_distribution is implementation-defined, which would make
 *  results differ across standard libraries. */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

    std::uint64_t next() { return eng_(); }

    /// Uniform integer in [0, n) via rejection sampling (no modulo bias).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
        std::uint64_t v = eng_();
        while (v > limit) v = eng_();
        return v % n;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /** Draws `count` distinct elements from `pool` by partial Fisher-Yates,
     *  consuming exactly `count` bounded draws. `pool` is taken by value; the
     *  first `count` slots end up holding the sample (unsorted). */
    template <typename T>
    std::vector<T> sample(std::vector<T> pool, std::size_t count) {
        if (count > pool.size()) count = pool.size();
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(below(pool.size() - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(count);
        return pool;
    }

private:
    std::mt19937_64 eng_;
};

/// Per-trial seed: a pure function of the master seed and the trial's
/// coordinates. Policy and deployment are deliberately *not* mixed in, so the
/// same (attack, level, trial) triple sees the same victim/attacker draw and
/// sampling stream under every policy — paired trials, much tighter
/// comparisons between policies at equal trial counts.
constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t attack_id,
                                   std::uint64_t level_index, std::uint64_t trial_index) {
    std::uint64_t s = splitmix64(master ^ 0x5bf0f1d78e2ca1a3ULL);
    s = splitmix64(s ^ attack_id);
    s = splitmix64(s ^ (level_index * 0x9e3779b97f4a7c15ULL));
    s = splitmix64(s ^ (trial_index * 0xd6e8feb86659fd93ULL));
    return s;
}

} // namespace bgpsim
