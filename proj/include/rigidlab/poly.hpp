#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "rigidlab/budget.hpp"
#include "rigidlab/field.hpp"
#include "rigidlab/matrix.hpp"

namespace rigidlab {

// Multilinear monomial: strictly increasing variable indices and a coefficient.
struct Monomial {
    std::vector<std::uint32_t> vars;
    Scalar coeff;
};

// Sparse multilinear polynomial over z_0..z_{n-1}. No two monomials share a
// variable set; zero coefficients are never stored.
class SparseMultilinearPoly {
  public:
    SparseMultilinearPoly(std::uint32_t n_vars, FieldSpec field)
        : n_vars_(n_vars), field_(field) {}

    static SparseMultilinearPoly from_map(std::uint32_t n_vars, FieldSpec field,
                                          std::map<std::vector<std::uint32_t>, Scalar> terms);

    std::uint32_t n_vars() const { return n_vars_; }
    const FieldSpec& field() const { return field_; }
    const std::vector<Monomial>& monomials() const { return monomials_; }
    std::size_t monomial_count() const { return monomials_.size(); }
    std::size_t degree() const;  // 0 for the zero polynomial

    // Evaluation at a 0/1 point given as an index; variable j is bit
    // (n_vars-1-j), so index equals the integer value of (z_0 .. z_{n-1}).
    Scalar eval_index(std::uint64_t point) const;
    Scalar eval(const std::vector<int>& point) const;

    // Evaluation at arbitrary field elements.
    Scalar eval_scalars(const std::vector<Scalar>& point) const;

  private:
    std::uint32_t n_vars_;
    FieldSpec field_;
    std::vector<Monomial> monomials_;
};

// Integer-coefficient univariate polynomial in the binomial basis:
// P(w) = sum_j coeffs[j] * C(w, j). Exact on every integer w >= 0.
// Matches r prescribed targets at w = k+1 .. k+r.
struct WeightInterpolant {
    long long k = 0;  // window offset; k = -1 anchors the window at weight 0
    std::vector<mpz_class> coeffs;

    std::size_t r() const { return coeffs.size(); }
    mpz_class eval(long long w) const;
};

// Unique degree-(r-1) integer polynomial through (k+1, targets[0]) .. (k+r, targets[r-1]),
// by Newton forward differences extrapolated down to 0..r-1. Requires r >= 1, k >= -1.
WeightInterpolant weight_interpolant(long long k, const std::vector<mpz_class>& targets);

// Same machinery over an arbitrary field (used when targets are field values).
std::vector<Scalar> field_weight_interpolant(long long k, const std::vector<Scalar>& targets,
                                             const FieldSpec& field);

// sum_j a_j e_j(z_0..z_{n-1}) where e_j is the sum of all degree-j multilinear
// monomials; on any 0/1 input of weight w this evaluates to P(w) in the field.
SparseMultilinearPoly interpolant_to_poly(const WeightInterpolant& w, std::uint32_t n,
                                          const FieldSpec& field);
SparseMultilinearPoly elementary_symmetric_poly(const std::vector<Scalar>& coeffs, std::uint32_t n,
                                                const FieldSpec& field);

// z_i -> x_i * y_i: maps an n-variate polynomial to a 2n-variate one where
// x_i is variable i and y_i is variable n+i. Monomial count is unchanged.
SparseMultilinearPoly substitute_products(const SparseMultilinearPoly& p);

// Composition with the coordinate-wise XOR by a fixed vector: the result
// evaluates at z exactly as p does at z^shift. Degree is unchanged.
// Shift bit for variable j is bit (n-1-j) of `shift`.
SparseMultilinearPoly shifted_substitute(const SparseMultilinearPoly& p, std::uint64_t shift);

// Lemma-style monomial-to-rank factorization: one outer-product term per
// monomial of a polynomial over x_0..x_{n-1}, y_0..y_{n-1}.
FactoredMatrix poly_to_factored(const SparseMultilinearPoly& p, const Budget& budget = Budget{});

// Unique multilinear extension of a truth table of 2^k field values
// (Moebius / inclusion-exclusion coefficients).
SparseMultilinearPoly multilinear_extension(const std::vector<Scalar>& table,
                                            const FieldSpec& field);

// Scale every coefficient by c.
SparseMultilinearPoly scale_poly(const SparseMultilinearPoly& p, const Scalar& c);

}  // namespace rigidlab
