#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lcl {

// Counter-based seed derivation: sub-streams are identified by a purpose tag
// and an index, so parallel consumers of the same master seed never collide
// and generation order does not matter.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t master, std::string_view tag, uint64_t index = 0) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    return splitmix64(splitmix64(master ^ h) + index);
}

using Rng = std::mt19937_64;

inline Rng make_rng(uint64_t master, std::string_view tag, uint64_t index = 0) {
    return Rng(derive_seed(master, tag, index));
}

// std::uniform_int_distribution is not bit-reproducible across standard
// libraries; this is, and it is all the schedules need.
inline uint64_t uniform_below(Rng& rng, uint64_t n) {
    if (n == 0) return 0;
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

inline bool coin(Rng& rng) { return (rng() >> 63) != 0; }

template <typename T>
void shuffle_vec(std::vector<T>& v, Rng& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        size_t j = uniform_below(rng, i);
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace lcl
