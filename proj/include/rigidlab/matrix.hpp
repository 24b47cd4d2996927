#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "rigidlab/budget.hpp"
#include "rigidlab/field.hpp"

namespace rigidlab {

// Column of exact field elements. Exactly one backing vector is live,
// chosen by the owning object's field kind.
struct ScalarVec {
    std::vector<std::uint64_t> u;  // prime-field residues
    std::vector<mpq_class> q;      // rationals

    static ScalarVec zeros(std::size_t len, const FieldSpec& f);
    static ScalarVec from_scalars(const std::vector<Scalar>& v, const FieldSpec& f);

    std::size_t size(const FieldSpec& f) const { return f.is_prime() ? u.size() : q.size(); }
    Scalar at(std::size_t i, const FieldSpec& f) const;
    void set(std::size_t i, const Scalar& s, const FieldSpec& f);
};

// Dense row-major matrix of exact field elements.
class DenseMatrix {
  public:
    DenseMatrix(std::size_t rows, std::size_t cols, FieldSpec field);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const FieldSpec& field() const { return field_; }

    Scalar at(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, const Scalar& s);

    // Raw storage, for hot paths. Prime-field matrices use u(), rationals use q().
    std::vector<std::uint64_t>& u() { return u_; }
    const std::vector<std::uint64_t>& u() const { return u_; }
    std::vector<mpq_class>& q() { return q_; }
    const std::vector<mpq_class>& q() const { return q_; }

    bool operator==(const DenseMatrix& o) const;

    std::string to_csv() const;
    static DenseMatrix from_csv(const std::string& text, const FieldSpec& field);

  private:
    FieldSpec field_;
    std::size_t rows_, cols_;
    std::vector<std::uint64_t> u_;
    std::vector<mpq_class> q_;
};

// Exact rank. Gaussian elimination over F_p; fraction-free (Bareiss)
// elimination over Q so intermediates stay integral.
std::size_t rank(const DenseMatrix& m);

// Number of positions where the two matrices differ. Shapes and fields must match.
std::uint64_t hamming_distance(const DenseMatrix& a, const DenseMatrix& b);

// Low-rank representation as an ordered sum of outer products
// sum_k left_k (x) right_k; never materialized unless asked.
class FactoredMatrix {
  public:
    FactoredMatrix(std::size_t rows, std::size_t cols, FieldSpec field);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const FieldSpec& field() const { return field_; }
    std::size_t term_count() const { return left_.size(); }

    void add_term(ScalarVec left, ScalarVec right);
    void add_term(const std::vector<Scalar>& left, const std::vector<Scalar>& right);

    const ScalarVec& left(std::size_t k) const { return left_[k]; }
    const ScalarVec& right(std::size_t k) const { return right_[k]; }

    Scalar entry(std::size_t r, std::size_t c) const;  // O(terms)
    std::vector<Scalar> column(std::size_t c) const;
    std::vector<Scalar> row(std::size_t r) const;

  private:
    FieldSpec field_;
    std::size_t rows_, cols_;
    std::vector<ScalarVec> left_, right_;
};

DenseMatrix materialize(const FactoredMatrix& f, const Budget& budget = Budget{});

// Value-semantic append: returns a copy with one extra outer-product term.
FactoredMatrix append_rank_one(const FactoredMatrix& f, const std::vector<Scalar>& left,
                               const std::vector<Scalar>& right);

}  // namespace rigidlab
