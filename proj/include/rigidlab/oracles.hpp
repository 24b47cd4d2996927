#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rigidlab/matrix.hpp"

namespace rigidlab {

struct OracleBudget {
    std::uint64_t max_enumeration = std::uint64_t{1} << 26;  // candidate matrices / edit sets
    int max_dim = 5;                                         // side length for full enumeration
};

// Exact rigidity by definition: minimum Hamming distance from m to any
// matrix of rank <= r, over a prime field. Enumerates all p^(rows*cols)
// candidates, pruning by the running minimum before rank is ever computed.
std::uint64_t brute_force_rigidity(const DenseMatrix& m, std::size_t r,
                                   const OracleBudget& budget = OracleBudget{});

// The dual oracle: minimum rank reachable by changing at most t entries,
// enumerating edit positions and replacement values.
std::size_t min_rank_within(const DenseMatrix& m, std::uint64_t t,
                            const OracleBudget& budget = OracleBudget{});

struct ConsistencyReport {
    bool ok = true;
    std::vector<std::string> violations;
};

// Galois-connection consistency of the two oracles:
// min_rank_within(m, R_m(r)) <= r and R_m(min_rank_within(m, t)) <= t.
ConsistencyReport cross_validate(const DenseMatrix& m,
                                 const OracleBudget& budget = OracleBudget{});

}  // namespace rigidlab
