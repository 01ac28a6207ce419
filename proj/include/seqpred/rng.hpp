#pragma once

#include <cstdint>
#include <vector>

namespace seqpred {

/// splitmix64 step; used both as a mixer for seed derivation and as the
/// state-advance function of DetRng.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Mix an extra word into a seed. Chained calls derive independent streams
/// from (seed, index, ...) tuples so results never depend on evaluation order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t s = seed ^ (salt * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull);
    return splitmix64(s);
}

/// Small deterministic RNG with a fully specified algorithm, so that seeded
/// runs reproduce byte-identically on every platform. Not cryptographic.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [0, n) without modulo bias (rejection sampling).
    std::uint64_t next_below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % n;
    }

private:
    std::uint64_t state_;
};

/// Seeded Fisher-Yates shuffle. std::shuffle leaves the engine-consumption
/// pattern unspecified, so we spell the loop out.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, DetRng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace seqpred
