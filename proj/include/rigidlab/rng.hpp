#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rigidlab {

// Child seed = stable hash of (parent seed, component label, index).
// splitmix64 applied to parent XOR fnv1a64(label) XOR golden-ratio-mixed index.
// Documented so the seed tree is reproducible from configs alone.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label, std::uint64_t index);

// Thin deterministic wrapper over mt19937_64. All randomness in the library
// flows through explicitly seeded instances of this class.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t u64() { return gen_(); }

    // Uniform n-bit value, 0 <= n <= 64.
    std::uint64_t bits(int n) {
        if (n <= 0) return 0;
        std::uint64_t v = gen_();
        return n >= 64 ? v : (v >> (64 - n));
    }

    // Uniform value in [0, bound), bound >= 1. Rejection sampling.
    std::uint64_t below(std::uint64_t bound);

  private:
    std::mt19937_64 gen_;
};

}  // namespace rigidlab
