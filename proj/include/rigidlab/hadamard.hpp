#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rigidlab/budget.hpp"
#include "rigidlab/field.hpp"
#include "rigidlab/matrix.hpp"

namespace rigidlab {

// Inclusive Hamming-weight interval.
struct WeightWindow {
    int lo = 0;
    int hi = 0;

    WeightWindow() = default;
    WeightWindow(int lo_, int hi_);
    bool contains(int w) const { return lo <= w && w <= hi; }
};

struct HadamardSpec {
    int n;
    FieldSpec field;

    HadamardSpec(int n_, FieldSpec field_);
};

// Function from (row, col) to the target value at that entry; lets
// corrections run without materializing the target.
using EntryOracle = std::function<Scalar(std::size_t, std::size_t)>;

// (-1)^<x,y> where x, y are n-bit vectors given as indices.
Scalar hadamard_entry(const HadamardSpec& spec, std::uint64_t x, std::uint64_t y);
EntryOracle hadamard_oracle(const HadamardSpec& spec);

// 2^n x 2^n matrix, index order = integer value of the bit vector.
DenseMatrix materialize_hadamard(const HadamardSpec& spec, const Budget& budget = Budget{});

// All indices whose bit-vector weight lies outside [lo, hi].
std::vector<std::size_t> out_of_window_indices(int n, const WeightWindow& window);

// Appends one rank-one correction per bad column, then per bad row, so the
// result agrees with the target oracle on every listed line and is unchanged
// elsewhere. Term count grows by exactly |bad_rows| + |bad_cols|.
FactoredMatrix correct_rows_columns(const FactoredMatrix& f, const EntryOracle& target,
                                    const std::vector<std::size_t>& bad_rows,
                                    const std::vector<std::size_t>& bad_cols);

// Exact count of y with |y| in the window and <x,y> <= b, for |x| = x_weight:
// sum_{k in window} sum_{s<=b} C(|x|, s) * C(n-|x|, k-s).
mpz_class low_ip_count(int n, int x_weight, long long b, const WeightWindow& window);
// Same, with x given as a bit vector (only its weight matters).
mpz_class low_ip_count_x(int n, std::uint64_t x, long long b, const WeightWindow& window);

}  // namespace rigidlab
