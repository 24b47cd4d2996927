#pragma once

#include <cstdint>

#include "rigidlab/errors.hpp"

namespace rigidlab {

// Memory budget, counted in scalar entries. Materialization and other
// allocation-heavy operations charge against it before allocating.
// The RIGIDLAB_BUDGET environment variable overrides the default.
struct Budget {
    std::uint64_t max_scalars = std::uint64_t{1} << 28;

    static Budget from_env();

    void charge(std::uint64_t scalars, const char* what) const;
    bool fits(std::uint64_t scalars) const { return scalars <= max_scalars; }
};

}  // namespace rigidlab
