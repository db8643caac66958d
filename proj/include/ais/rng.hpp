#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ais {

// All stochastic code in the library draws from one of these, seeded through
// derive_seed() below. A single user-facing seed fans out to independent,
// label-addressed streams, so adding a consumer (or reordering calls inside
// one) never perturbs the draws seen by another.
using Rng = std::mt19937_64;

namespace detail {

// splitmix64 finalizer: cheap, well-distributed 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// FNV-1a over the label bytes.
constexpr std::uint64_t hash_label(std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

// Deterministically derive a child seed from a base seed and a purpose label.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::string_view label) {
    return detail::mix64(base ^ detail::mix64(detail::hash_label(label)));
}

// Indexed variant for per-element streams (one stream per candidate, per
// user, ...) whose draw sequences must not depend on each other's history.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::string_view label,
                                    std::uint64_t index) {
    return detail::mix64(derive_seed(base, label) ^ detail::mix64(index));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace ais
