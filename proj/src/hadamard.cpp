#include "rigidlab/hadamard.hpp"

#include <bit>

#include "rigidlab/binomial.hpp"

namespace rigidlab {

WeightWindow::WeightWindow(int lo_, int hi_) : lo(lo_), hi(hi_) {
    if (lo > hi) throw InvalidArgument("weight window requires lo <= hi");
}

HadamardSpec::HadamardSpec(int n_, FieldSpec field_) : n(n_), field(field_) {
    if (n < 0 || n > 30) throw InvalidArgument("Hadamard bit-length out of range");
    if (field.has_char_two())
        throw InvalidArgument(
            "characteristic 2 collapses the Hadamard matrix: -1 = 1 makes H_n the all-ones "
            "rank-1 matrix; pick an odd prime or Q");
}

Scalar hadamard_entry(const HadamardSpec& spec, std::uint64_t x, std::uint64_t y) {
    const std::uint64_t dim = std::uint64_t{1} << spec.n;
    if (x >= dim || y >= dim) throw InvalidArgument("hadamard_entry: index out of range");
    const bool odd = std::popcount(x & y) & 1;
    return odd ? spec.field.minus_one() : spec.field.one();
}

EntryOracle hadamard_oracle(const HadamardSpec& spec) {
    return [spec](std::size_t r, std::size_t c) { return hadamard_entry(spec, r, c); };
}

DenseMatrix materialize_hadamard(const HadamardSpec& spec, const Budget& budget) {
    const std::size_t dim = std::size_t{1} << spec.n;
    budget.charge(static_cast<std::uint64_t>(dim) * dim, "materialize_hadamard");
    DenseMatrix m(dim, dim, spec.field);
    const Scalar one = spec.field.one(), mone = spec.field.minus_one();
    for (std::size_t x = 0; x < dim; ++x)
        for (std::size_t y = 0; y < dim; ++y)
            m.set(x, y, (std::popcount(x & y) & 1) ? mone : one);
    return m;
}

std::vector<std::size_t> out_of_window_indices(int n, const WeightWindow& window) {
    std::vector<std::size_t> out;
    const std::size_t dim = std::size_t{1} << n;
    for (std::size_t i = 0; i < dim; ++i) {
        const int w = std::popcount(i);
        if (!window.contains(w)) out.push_back(i);
    }
    return out;
}

FactoredMatrix correct_rows_columns(const FactoredMatrix& f, const EntryOracle& target,
                                    const std::vector<std::size_t>& bad_rows,
                                    const std::vector<std::size_t>& bad_cols) {
    const FieldSpec& fld = f.field();
    FactoredMatrix cur = f;
    // Columns first: each correction is supported on a single column, so later
    // corrections never disturb earlier ones.
    for (std::size_t c : bad_cols) {
        if (c >= f.cols()) throw InvalidArgument("bad column index out of range");
        std::vector<Scalar> delta = cur.column(c);
        for (std::size_t i = 0; i < f.rows(); ++i) delta[i] = fld.sub(target(i, c), delta[i]);
        std::vector<Scalar> unit(f.cols(), fld.zero());
        unit[c] = fld.one();
        cur.add_term(delta, unit);
    }
    // Row corrections see a difference of zero on already-corrected columns.
    for (std::size_t r : bad_rows) {
        if (r >= f.rows()) throw InvalidArgument("bad row index out of range");
        std::vector<Scalar> delta = cur.row(r);
        for (std::size_t j = 0; j < f.cols(); ++j) delta[j] = fld.sub(target(r, j), delta[j]);
        std::vector<Scalar> unit(f.rows(), fld.zero());
        unit[r] = fld.one();
        cur.add_term(unit, delta);
    }
    return cur;
}

mpz_class low_ip_count(int n, int x_weight, long long b, const WeightWindow& window) {
    if (x_weight < 0 || x_weight > n) throw InvalidArgument("x weight out of range");
    mpz_class total = 0;
    for (int k = std::max(window.lo, 0); k <= std::min(window.hi, n); ++k)
        for (long long s = 0; s <= b && s <= x_weight; ++s)
            total += binomial(x_weight, s) * binomial(n - x_weight, k - s);
    return total;
}

mpz_class low_ip_count_x(int n, std::uint64_t x, long long b, const WeightWindow& window) {
    return low_ip_count(n, std::popcount(x), b, window);
}

}  // namespace rigidlab
