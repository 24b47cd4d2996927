#include "rigidlab/rng.hpp"

namespace rigidlab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t parent, std::string_view label, std::uint64_t index) {
    return splitmix64(parent ^ fnv1a64(label) ^ splitmix64(index));
}

std::uint64_t Rng::below(std::uint64_t bound) {
    // Rejection sampling over the smallest covering power of two.
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    while (true) {
        std::uint64_t v = gen_() & mask;
        if (v < bound) return v;
    }
}

}  // namespace rigidlab
