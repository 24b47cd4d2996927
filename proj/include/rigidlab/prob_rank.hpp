#pragma once

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rigidlab/budget.hpp"
#include "rigidlab/matrix.hpp"

namespace rigidlab {

using ordered_json = nlohmann::ordered_json;

// Seeded distribution over FactoredMatrix values together with the target it
// claims to compute, a rank bound, and an error bound. `entry` evaluates one
// entry of sample(seed) without building the factorization; the two views
// agree identically by construction.
struct ProbMatrixSampler {
    std::size_t rows = 0, cols = 0;
    FieldSpec field;
    std::function<FactoredMatrix(std::uint64_t)> sample;
    std::function<Scalar(std::uint64_t, std::size_t, std::size_t)> entry;
    std::function<Scalar(std::size_t, std::size_t)> target;
    std::size_t claimed_rank = 0;
    mpq_class claimed_error;
    bool sign_mode = false;

    // sign_mode compares sign(value) to the 0/1 target under the convention
    // value <= 0 <=> target is 1; otherwise exact value agreement.
    bool agrees(const Scalar& value, const Scalar& tgt) const;
};

// Equality sampler: k = ceil(log2(1/eps)) random parity hashes; the expanded
// product gives 2^k rank-one bucket-indicator terms.
ProbMatrixSampler eq_sampler(int n, const mpq_class& eps, const FieldSpec& field);

// The sample as a function of explicit hash subsets, for exhaustive averaging
// over the whole hash space.
FactoredMatrix eq_sample_from_subsets(int n, const std::vector<std::uint64_t>& subsets,
                                      const FieldSpec& field);
int eq_hash_count(const mpq_class& eps);

// Non-strict comparison sampler on n-bit integers: first-differing-bit sum of
// equality samplers plus a full-width equality term for the diagonal, each
// with error eps/(n+1). `strict` drops the diagonal term and computes [x < y].
ProbMatrixSampler leq_sampler(int n, const mpq_class& eps, const FieldSpec& field,
                              bool strict = false);

// Linear threshold function on x- and y-halves with integer weights.
struct LTFSpec {
    std::vector<long long> x_weights;
    std::vector<long long> y_weights;
    long long threshold = 0;

    int n() const { return static_cast<int>(x_weights.size()); }
    bool eval(std::uint64_t x, std::uint64_t y) const;
    ordered_json to_json() const;
    static LTFSpec from_json(const ordered_json& j);
};

// Sorted-value reduction of an LTF to index comparison, composed with the
// comparison sampler.
ProbMatrixSampler ltf_sampler(const LTFSpec& spec, const mpq_class& eps, const FieldSpec& field,
                              const Budget& budget = Budget{});

struct DepthTwoLTFCircuit {
    std::vector<LTFSpec> gates;
    std::vector<long long> top_weights;
    long long top_threshold = 0;

    int n() const { return gates.empty() ? 0 : gates.front().n(); }
    // Output convention: true iff sum_i w_i * f_i(x, y) <= top_threshold.
    bool eval(std::uint64_t x, std::uint64_t y) const;
    void validate() const;
    ordered_json to_json() const;
    static DepthTwoLTFCircuit from_json(const ordered_json& j);
};

// Probabilistic sign representation of a depth-two threshold circuit over Q:
// independent gate samplers at error eps/s, combined as
// (-top_threshold) * ones + sum_i w_i * P_i.
ProbMatrixSampler ltf_ltf_sign_sampler(const DepthTwoLTFCircuit& circuit, const mpq_class& eps,
                                       const Budget& budget = Budget{});

enum class ErrorEstimateMode { Exhaustive, MonteCarlo };

struct ErrorReport {
    std::size_t rows = 0, cols = 0;
    std::uint64_t trials = 0;
    ErrorEstimateMode mode = ErrorEstimateMode::Exhaustive;
    double delta = 1e-6;
    double max_error = 0.0;
    std::size_t argmax_row = 0, argmax_col = 0;
    double hoeffding_radius = 0.0;
    // Per-entry disagreement counts (row-major); populated on request.
    std::vector<std::uint64_t> per_entry_errors;
    std::vector<std::uint64_t> per_entry_trials;

    ordered_json to_json(bool include_histogram = false) const;
};

ErrorReport estimate_error(const ProbMatrixSampler& sampler, ErrorEstimateMode mode,
                           std::uint64_t trials, std::uint64_t seed, double delta = 1e-6,
                           const Budget& budget = Budget{});

}  // namespace rigidlab
