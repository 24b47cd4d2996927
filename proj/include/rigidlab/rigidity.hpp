#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <vector>

#include "rigidlab/budget.hpp"
#include "rigidlab/hadamard.hpp"
#include "rigidlab/poly.hpp"

namespace rigidlab {

using ordered_json = nlohmann::ordered_json;

// Parameters of the low-error pipeline. Defaults follow the explicit proof
// choices k = ceil(2*eps*n) - 1, r = floor((1/2-eps)*n) + 1, window
// [(1/2-eps)n, (1/2+eps)n] rounded outward; r is then raised, if needed, to
// keep the exactness range [k+1, k+r] covering every overlap reachable from
// in-window weights (the outward-rounded window can otherwise outgrow it).
struct NonRigidityParams {
    int n = 0;
    mpq_class eps;  // echo only; 0 when params were given explicitly
    long long k_offset = 0;
    long long r_points = 1;
    WeightWindow window;
    FieldSpec field;

    static NonRigidityParams defaults(int n, const mpq_class& eps, const FieldSpec& field);
    static NonRigidityParams full_window(int n, const FieldSpec& field);
    void validate() const;
    ordered_json to_json() const;
};

struct RigidityReport {
    int n = 0;
    FieldSpec field;
    ordered_json params;

    std::size_t monomial_count = 0;
    std::size_t correction_count = 0;
    std::size_t claimed_rank_bound = 0;

    // Valiant-regime combinatorial accounting.
    std::vector<long long> wrong_overlaps;         // overlap values the interpolant misses in-field
    std::optional<mpz_class> per_row_diff_bound;   // max low_ip_count over in-window weights
    std::optional<mpz_class> per_row_diff_exact;   // restricted to wrong overlaps
    std::optional<mpz_class> total_diff_exact;

    // High-error construction accounting.
    std::optional<long long> half_width_t;
    std::optional<mpz_class> monomial_bound;  // sum_{j <= 2t+1} C(n, j)
    std::optional<bool> per_entry_contract;   // sym-and: per-entry error <= eps provable

    // Filled in when the matrices fit the budget.
    std::optional<std::size_t> realized_rank;
    std::optional<std::uint64_t> total_diffs;
    std::optional<std::uint64_t> max_row_diffs;
    std::vector<std::uint64_t> row_diffs;

    ordered_json to_json() const;
    std::string row_diffs_csv() const;  // "row,weight,diffs" per materialized row
};

struct ValiantResult {
    FactoredMatrix matrix;
    RigidityReport report;
};

// Polynomial over x- and y-variables that equals (-1)^<x,y> whenever
// <x,y> lies in [k_offset+1, k_offset+r_points].
SparseMultilinearPoly ip2_window_poly(const NonRigidityParams& params);

// The low-error (Valiant-regime) construction: window polynomial factored
// into rank-one terms, out-of-window rows and columns corrected against the
// Hadamard entry oracle.
ValiantResult valiant_nonrigidity(const NonRigidityParams& params, const Budget& budget = Budget{});

// Smallest t with 2*exp(-2 t^2 / n) <= eps.
long long hoeffding_half_width(int n, const mpq_class& eps);
WeightWindow centered_window(int n, long long t);

// One sample of the probabilistic parity polynomial: uniform XOR shift plus
// a width-t window interpolant around n/2. For every z, over seeds,
// the sample evaluates to (-1)^|z| with probability >= 1 - eps.
SparseMultilinearPoly parity_prob_poly(int n, const mpq_class& eps, std::uint64_t seed,
                                       const FieldSpec& field);

// High-error pipeline: eps = 1/r_target, sampled parity polynomial composed
// with z_i -> x_i y_i, factored into rank-one terms.
ValiantResult high_error_nonrigidity(int n, std::uint64_t r_target, std::uint64_t seed,
                                     const FieldSpec& field, const Budget& budget = Budget{});

// Symmetric target f given by its weight profile; the pipeline approximates
// the matrix f(<x,y>) = f(|x AND y|).
struct SymmetricFunctionSpec {
    int n = 0;
    FieldSpec field;
    std::vector<Scalar> values;  // length n+1, indexed by Hamming weight

    static SymmetricFunctionSpec parity(int n, const FieldSpec& field);
    static SymmetricFunctionSpec majority(int n, const FieldSpec& field);
    static SymmetricFunctionSpec constant(int n, const FieldSpec& field, const Scalar& c);
    void validate() const;
    Scalar target_entry(std::uint64_t x, std::uint64_t y) const;
};

ValiantResult sym_and_nonrigidity(const SymmetricFunctionSpec& spec, std::uint64_t r_target,
                                  std::uint64_t seed, const Budget& budget = Budget{});

}  // namespace rigidlab
