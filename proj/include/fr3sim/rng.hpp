#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace fr3sim {

// Substreams are keyed by (master seed, tags...) through a splitmix64 mix so a
// draw never depends on evaluation order or thread count.

inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t tag(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                           std::initializer_list<std::uint64_t> keys) noexcept {
    std::uint64_t h = mix64(seed);
    for (auto k : keys) h = mix64(h ^ mix64(k));
    return h;
}

using Stream = std::mt19937_64;

inline Stream substream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
    return Stream{derive_seed(seed, keys)};
}

}  // namespace fr3sim
