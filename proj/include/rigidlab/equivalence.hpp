#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "rigidlab/budget.hpp"
#include "rigidlab/hadamard.hpp"
#include "rigidlab/matrix.hpp"
#include "rigidlab/prob_rank.hpp"

namespace rigidlab {

// Hadamard-covariant shift of a rank factorization: every left vector a is
// replaced by a^(x,y)[v] = (-1)^<v,y> a[v XOR x], every right vector b by
// b^(y,x), and the global (-1)^<x,y> sign is folded into the left vectors.
// Term count is unchanged; exact factorizations of H_n stay exact.
FactoredMatrix shift_factors(const FactoredMatrix& f, std::uint64_t x, std::uint64_t y);

// Uniform random shifts turn any factorization near H_n into a probabilistic
// matrix for H_n whose per-entry error equals the input's normalized Hamming
// error exactly. claimed_error is measured when materialization fits the
// budget, otherwise it must be supplied.
ProbMatrixSampler rigidity_to_prob_rank(const FactoredMatrix& f,
                                        std::optional<mpq_class> claimed_error = {},
                                        const Budget& budget = Budget{});

// k-query random self-reduction: separate sampling procedures for the row and
// column sides (each over an explicit finite randomness domain, so small
// instances can be enumerated exhaustively) and a reconstruction function g
// given by its truth table.
struct RSRSpec {
    int n = 0;
    int k = 0;
    std::uint64_t randomness_size = 0;  // domain size of each side's randomness
    std::function<std::vector<std::uint64_t>(std::uint64_t x, std::uint64_t rho)> queries_x;
    std::function<std::vector<std::uint64_t>(std::uint64_t y, std::uint64_t sigma)> queries_y;
    std::vector<Scalar> g_table;  // 2^k values, query i is variable i
    std::function<Scalar(std::uint64_t, std::uint64_t)> f;
    FieldSpec field;

    // Marginal uniformity of every query and the reconstruction identity,
    // checked by full enumeration. Feasible for n <= 3.
    void validate_exhaustive() const;
};

// Standard 4-query self-reduction of the inner product: queries
// (x+x', y+y'), (x+x', y'), (x', y+y'), (x', y') with XOR reconstruction.
RSRSpec ip2_rsr(int n, const FieldSpec& field);

// The reduction theorem's sampler: the multilinear extension of g composed
// with per-query inner products of the input factors, expanded into
// rank-one terms split by query side.
ProbMatrixSampler rsr_prob_rank(const RSRSpec& rsr, const FactoredMatrix& f,
                                std::optional<mpq_class> input_error = {},
                                const Budget& budget = Budget{});

// One-round public-coin protocol simulation: both parties draw the sample
// from the shared seed; Alice sends her row of the left factor against Bob's
// column of the right factor. Returns (answer, communication bits).
std::pair<Scalar, unsigned> simulate_protocol(const ProbMatrixSampler& sampler, std::size_t x,
                                              std::size_t y, std::uint64_t seed);

// Per-entry error frequency of the shifted sampler averaged over the full
// shift domain, computed exactly; returns the (min, max) over entries. The
// uniformization argument makes both equal the input's normalized error.
std::pair<mpq_class, mpq_class> exact_shift_error_range(const FactoredMatrix& f,
                                                        const Budget& budget = Budget{});

// Exact one-term-per-column factorization of a dense matrix.
FactoredMatrix exact_factors(const DenseMatrix& m);

// Copy of f with a single-entry rank-one correction setting entry (r, c).
FactoredMatrix with_entry_set(const FactoredMatrix& f, std::size_t r, std::size_t c,
                              const Scalar& value);

}  // namespace rigidlab
