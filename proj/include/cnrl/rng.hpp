#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cnrl {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and up to two salts.
/// Used everywhere a component needs its own RNG stream (per-walk streams,
/// negative-sampling streams, sweep streams) so that streams never interfere.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt_a, std::uint64_t salt_b = 0) {
    return splitmix64(splitmix64(splitmix64(base) + salt_a) + salt_b);
}

/// Deterministic RNG. Integer and double draws are implemented by hand
/// because std:: distributions are implementation-defined; output is
/// reproducible for a given seed on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, bound). Unbiased (Lemire rejection).
    std::uint64_t next_below(std::uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    std::mt19937_64 gen_;
};

// FNV-1a, used for graph/corpus/config fingerprints.
inline constexpr std::uint64_t kFnvOffsetBasis = 14695981039346656037ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = kFnvOffsetBasis) {
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= kFnvPrime;
    }
    return h;
}

inline std::uint64_t fnv1a64_u64(std::uint64_t value, std::uint64_t h = kFnvOffsetBasis) {
    for (int i = 0; i < 8; ++i) {
        h ^= static_cast<unsigned char>(value >> (8 * i));
        h *= kFnvPrime;
    }
    return h;
}

}  // namespace cnrl
