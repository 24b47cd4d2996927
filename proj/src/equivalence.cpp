#include "rigidlab/equivalence.hpp"

#include <bit>

#include "rigidlab/poly.hpp"
#include "rigidlab/rng.hpp"

namespace rigidlab {

namespace {

int square_power_dims(const FactoredMatrix& f) {
    if (f.rows() != f.cols()) throw InvalidArgument("shift requires a square matrix");
    if (!std::has_single_bit(f.rows())) throw InvalidArgument("dimension must be a power of two");
    return std::countr_zero(f.rows());
}

}  // namespace

FactoredMatrix shift_factors(const FactoredMatrix& f, std::uint64_t x, std::uint64_t y) {
    const int n = square_power_dims(f);
    const FieldSpec& fld = f.field();
    if (fld.has_char_two())
        throw InvalidArgument("the shift twist needs -1 != 1; characteristic 2 is rejected");
    const std::size_t dim = f.rows();
    if (x >= dim || y >= dim) throw InvalidArgument("shift vector out of range");

    const bool global = std::popcount(x & y) & 1;
    FactoredMatrix out(dim, dim, fld);
    for (std::size_t t = 0; t < f.term_count(); ++t) {
        ScalarVec left = ScalarVec::zeros(dim, fld);
        ScalarVec right = ScalarVec::zeros(dim, fld);
        for (std::size_t v = 0; v < dim; ++v) {
            // (-1)^<v,y> a[v^x], with the global (-1)^<x,y> folded in.
            Scalar lv = f.left(t).at(v ^ x, fld);
            if ((std::popcount(v & y) & 1) ^ static_cast<int>(global)) lv = fld.neg(lv);
            left.set(v, lv, fld);
            Scalar rv = f.right(t).at(v ^ y, fld);
            if (std::popcount(v & x) & 1) rv = fld.neg(rv);
            right.set(v, rv, fld);
        }
        out.add_term(std::move(left), std::move(right));
    }
    return out;
}

ProbMatrixSampler rigidity_to_prob_rank(const FactoredMatrix& f,
                                        std::optional<mpq_class> claimed_error,
                                        const Budget& budget) {
    const int n = square_power_dims(f);
    const FieldSpec fld = f.field();
    const std::size_t dim = f.rows();
    const HadamardSpec hspec{n, fld};

    mpq_class error;
    if (claimed_error) {
        error = *claimed_error;
    } else {
        if (!budget.fits(2 * static_cast<std::uint64_t>(dim) * dim))
            throw InvalidArgument(
                "input too large to measure its error; pass claimed_error explicitly");
        const std::uint64_t ham =
            hamming_distance(materialize(f, budget), materialize_hadamard(hspec, budget));
        error = mpq_class(ham);
        error /= mpq_class(mpz_class(1) << (2 * n));
    }

    auto base = std::make_shared<FactoredMatrix>(f);
    ProbMatrixSampler s;
    s.rows = s.cols = dim;
    s.field = fld;
    s.claimed_rank = f.term_count();
    s.claimed_error = error;
    s.sample = [base, n](std::uint64_t seed) {
        Rng rng(derive_seed(seed, "hadamard-shift", 0));
        const std::uint64_t x = rng.bits(n);
        const std::uint64_t y = rng.bits(n);
        return shift_factors(*base, x, y);
    };
    s.entry = [base, n, fld](std::uint64_t seed, std::size_t vi, std::size_t vj) {
        Rng rng(derive_seed(seed, "hadamard-shift", 0));
        const std::uint64_t x = rng.bits(n);
        const std::uint64_t y = rng.bits(n);
        Scalar v = base->entry(vi ^ x, vj ^ y);
        const int sign = (std::popcount(vi & y) + std::popcount(vj & x) + std::popcount(x & y)) & 1;
        return sign ? fld.neg(v) : v;
    };
    s.target = hadamard_oracle(hspec);
    return s;
}

void RSRSpec::validate_exhaustive() const {
    const std::uint64_t dim = std::uint64_t{1} << n;
    if (g_table.size() != (std::size_t{1} << k))
        throw InvalidArgument("g table must have 2^k entries");
    const Scalar one = field.one(), zero = field.zero();
    auto as_bit = [&](const Scalar& s) {
        if (s == one) return 1;
        if (s == zero) return 0;
        throw InvalidArgument("self-reduction requires 0/1 values of f");
    };
    // Marginal uniformity: over the randomness, each query must hit every
    // value the same number of times, for every input.
    for (int side = 0; side < 2; ++side) {
        const auto& q = side == 0 ? queries_x : queries_y;
        for (std::uint64_t v = 0; v < dim; ++v) {
            std::vector<std::vector<std::uint64_t>> counts(k, std::vector<std::uint64_t>(dim, 0));
            for (std::uint64_t r = 0; r < randomness_size; ++r) {
                const auto qs = q(v, r);
                if (qs.size() != static_cast<std::size_t>(k))
                    throw InvalidArgument("sampler must emit exactly k queries");
                for (int i = 0; i < k; ++i) ++counts[i][qs[i]];
            }
            for (int i = 0; i < k; ++i)
                for (std::uint64_t z = 0; z < dim; ++z)
                    if (counts[i][z] * dim != randomness_size)
                        throw InvalidArgument("query marginal is not uniform");
        }
    }
    // Reconstruction: f(x,y) = g(f(x_1,y_1), ..., f(x_k,y_k)) everywhere.
    for (std::uint64_t x = 0; x < dim; ++x)
        for (std::uint64_t y = 0; y < dim; ++y)
            for (std::uint64_t r = 0; r < randomness_size; ++r)
                for (std::uint64_t s = 0; s < randomness_size; ++s) {
                    const auto qx = queries_x(x, r);
                    const auto qy = queries_y(y, s);
                    std::uint64_t idx = 0;
                    for (int i = 0; i < k; ++i)
                        idx |= static_cast<std::uint64_t>(as_bit(f(qx[i], qy[i])))
                               << (k - 1 - i);
                    if (g_table[idx] != f(x, y))
                        throw InvalidArgument("reconstruction identity fails");
                }
}

RSRSpec ip2_rsr(int n, const FieldSpec& field) {
    if (n < 1 || n > 30) throw InvalidArgument("n out of range");
    RSRSpec spec;
    spec.n = n;
    spec.k = 4;
    spec.randomness_size = std::uint64_t{1} << n;
    spec.field = field;
    spec.queries_x = [](std::uint64_t x, std::uint64_t rho) {
        return std::vector<std::uint64_t>{x ^ rho, x ^ rho, rho, rho};
    };
    spec.queries_y = [](std::uint64_t y, std::uint64_t sigma) {
        return std::vector<std::uint64_t>{y ^ sigma, sigma, y ^ sigma, sigma};
    };
    for (std::uint64_t v = 0; v < 16; ++v)
        spec.g_table.push_back(std::popcount(v) & 1 ? field.one() : field.zero());
    spec.f = [field](std::uint64_t x, std::uint64_t y) {
        return std::popcount(x & y) & 1 ? field.one() : field.zero();
    };
    return spec;
}

ProbMatrixSampler rsr_prob_rank(const RSRSpec& rsr, const FactoredMatrix& f,
                                std::optional<mpq_class> input_error, const Budget& budget) {
    if (f.rows() != (std::size_t{1} << rsr.n) || f.cols() != f.rows())
        throw InvalidArgument("input factors must be 2^n x 2^n");
    if (rsr.n <= 3) rsr.validate_exhaustive();
    const FieldSpec fld = rsr.field;
    if (f.field() != fld) throw InvalidArgument("field mismatch between factors and reduction");
    const std::size_t dim = f.rows();
    const std::size_t r_in = f.term_count();

    mpq_class in_err;
    if (input_error) {
        in_err = *input_error;
    } else {
        if (!budget.fits(2 * static_cast<std::uint64_t>(dim) * dim))
            throw InvalidArgument(
                "input too large to measure its error; pass input_error explicitly");
        DenseMatrix m = materialize(f, budget);
        std::uint64_t ham = 0;
        for (std::size_t x = 0; x < dim; ++x)
            for (std::size_t y = 0; y < dim; ++y)
                if (m.at(x, y) != rsr.f(x, y)) ++ham;
        in_err = mpq_class(ham);
        in_err /= mpq_class(mpz_class(1) << (2 * rsr.n));
    }

    auto ext = std::make_shared<SparseMultilinearPoly>(multilinear_extension(rsr.g_table, fld));
    // Expanded term count: each degree-d monomial of g's extension splits
    // into r_in^d rank-one terms, one per choice of inner-product coordinate.
    mpz_class t_count = 0;
    for (const auto& m : ext->monomials()) {
        mpz_class ways = 1;
        for (std::size_t i = 0; i < m.vars.size(); ++i) ways *= static_cast<unsigned long>(r_in);
        t_count += ways;
    }
    budget.charge(2 * static_cast<std::uint64_t>(t_count.get_ui()) * dim, "rsr expansion");

    auto base = std::make_shared<FactoredMatrix>(f);
    auto spec = std::make_shared<RSRSpec>(rsr);
    ProbMatrixSampler s;
    s.rows = s.cols = dim;
    s.field = fld;
    s.claimed_rank = static_cast<std::size_t>(t_count.get_ui());
    s.claimed_error = mpq_class(rsr.k) * in_err;
    s.sample = [base, spec, ext, fld, dim, r_in](std::uint64_t seed) {
        Rng row_rng(derive_seed(seed, "rsr-row", 0));
        Rng col_rng(derive_seed(seed, "rsr-col", 0));
        const std::uint64_t rho = row_rng.below(spec->randomness_size);
        const std::uint64_t sigma = col_rng.below(spec->randomness_size);
        std::vector<std::vector<std::uint64_t>> qx(dim), qy(dim);
        for (std::uint64_t v = 0; v < dim; ++v) {
            qx[v] = spec->queries_x(v, rho);
            qy[v] = spec->queries_y(v, sigma);
        }
        FactoredMatrix out(dim, dim, fld);
        for (const auto& mono : ext->monomials()) {
            const std::size_t d = mono.vars.size();
            if (d > 0 && r_in == 0) continue;
            std::vector<std::size_t> phi(d, 0);
            while (true) {
                ScalarVec left = ScalarVec::zeros(dim, fld);
                ScalarVec right = ScalarVec::zeros(dim, fld);
                for (std::uint64_t v = 0; v < dim; ++v) {
                    Scalar lv = mono.coeff;
                    Scalar rv = fld.one();
                    for (std::size_t i = 0; i < d; ++i) {
                        lv = fld.mul(lv, base->left(phi[i]).at(qx[v][mono.vars[i]], fld));
                        rv = fld.mul(rv, base->right(phi[i]).at(qy[v][mono.vars[i]], fld));
                    }
                    left.set(v, lv, fld);
                    right.set(v, rv, fld);
                }
                out.add_term(std::move(left), std::move(right));
                std::size_t pos = 0;
                while (pos < d && ++phi[pos] == r_in) phi[pos++] = 0;
                if (pos == d) break;
            }
        }
        return out;
    };
    s.entry = [base, spec, ext](std::uint64_t seed, std::size_t x, std::size_t y) {
        Rng row_rng(derive_seed(seed, "rsr-row", 0));
        Rng col_rng(derive_seed(seed, "rsr-col", 0));
        const std::uint64_t rho = row_rng.below(spec->randomness_size);
        const std::uint64_t sigma = col_rng.below(spec->randomness_size);
        const auto qx = spec->queries_x(x, rho);
        const auto qy = spec->queries_y(y, sigma);
        std::vector<Scalar> z;
        z.reserve(spec->k);
        for (int i = 0; i < spec->k; ++i) z.push_back(base->entry(qx[i], qy[i]));
        return ext->eval_scalars(z);
    };
    s.target = [spec](std::size_t x, std::size_t y) { return spec->f(x, y); };
    return s;
}

std::pair<Scalar, unsigned> simulate_protocol(const ProbMatrixSampler& sampler, std::size_t x,
                                              std::size_t y, std::uint64_t seed) {
    if (x >= sampler.rows || y >= sampler.cols)
        throw InvalidArgument("protocol input out of range");
    const FactoredMatrix f = sampler.sample(seed);
    const Scalar answer = f.entry(x, y);
    const unsigned bits = std::bit_width(static_cast<std::uint64_t>(sampler.claimed_rank));
    return {answer, bits};
}

std::pair<mpq_class, mpq_class> exact_shift_error_range(const FactoredMatrix& f,
                                                        const Budget& budget) {
    const int n = square_power_dims(f);
    const FieldSpec fld = f.field();
    const std::size_t dim = f.rows();
    budget.charge(2 * static_cast<std::uint64_t>(dim) * dim, "exact shift averaging");
    if (n > 3) throw BudgetExceeded("exact shift averaging is feasible only for n <= 3");
    const HadamardSpec hspec{n, fld};
    DenseMatrix base = materialize(f, budget);
    DenseMatrix h = materialize_hadamard(hspec, budget);

    // Evaluate the twisted value at every entry under every shift pair and
    // compare against H directly; nothing here assumes the uniformization
    // identity being verified.
    std::vector<std::uint64_t> err(dim * dim, 0);
    for (std::size_t x = 0; x < dim; ++x)
        for (std::size_t y = 0; y < dim; ++y)
            for (std::size_t vi = 0; vi < dim; ++vi)
                for (std::size_t vj = 0; vj < dim; ++vj) {
                    Scalar v = base.at(vi ^ x, vj ^ y);
                    const int sign = (std::popcount(vi & y) + std::popcount(vj & x) +
                                      std::popcount(x & y)) &
                                     1;
                    if (sign) v = fld.neg(v);
                    if (v != h.at(vi, vj)) ++err[vi * dim + vj];
                }
    std::uint64_t min_count = err[0], max_count = err[0];
    for (std::uint64_t e : err) {
        min_count = std::min(min_count, e);
        max_count = std::max(max_count, e);
    }
    const mpz_class shifts = mpz_class(1) << (2 * n);
    mpq_class lo(min_count), hi(max_count);
    lo /= mpq_class(shifts);
    hi /= mpq_class(shifts);
    lo.canonicalize();
    hi.canonicalize();
    return {lo, hi};
}

FactoredMatrix exact_factors(const DenseMatrix& m) {
    FactoredMatrix f(m.rows(), m.cols(), m.field());
    const FieldSpec& fld = m.field();
    for (std::size_t c = 0; c < m.cols(); ++c) {
        ScalarVec col = ScalarVec::zeros(m.rows(), fld);
        for (std::size_t r = 0; r < m.rows(); ++r) col.set(r, m.at(r, c), fld);
        ScalarVec unit = ScalarVec::zeros(m.cols(), fld);
        unit.set(c, fld.one(), fld);
        f.add_term(std::move(col), std::move(unit));
    }
    return f;
}

FactoredMatrix with_entry_set(const FactoredMatrix& f, std::size_t r, std::size_t c,
                              const Scalar& value) {
    const FieldSpec& fld = f.field();
    const Scalar delta = fld.sub(value, f.entry(r, c));
    std::vector<Scalar> left(f.rows(), fld.zero()), right(f.cols(), fld.zero());
    left[r] = delta;
    right[c] = fld.one();
    return append_rank_one(f, left, right);
}

}  // namespace rigidlab
