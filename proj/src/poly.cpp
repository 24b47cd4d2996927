#include "rigidlab/poly.hpp"

#include <algorithm>
#include <bit>

#include "rigidlab/binomial.hpp"

namespace rigidlab {

SparseMultilinearPoly SparseMultilinearPoly::from_map(
    std::uint32_t n_vars, FieldSpec field, std::map<std::vector<std::uint32_t>, Scalar> terms) {
    SparseMultilinearPoly p(n_vars, field);
    for (auto& [vars, coeff] : terms) {
        if (field.is_zero(coeff)) continue;
        if (!vars.empty() && vars.back() >= n_vars)
            throw InvalidArgument("monomial variable index out of range");
        p.monomials_.push_back(Monomial{vars, coeff});
    }
    return p;
}

std::size_t SparseMultilinearPoly::degree() const {
    std::size_t d = 0;
    for (const auto& m : monomials_) d = std::max(d, m.vars.size());
    return d;
}

Scalar SparseMultilinearPoly::eval_index(std::uint64_t point) const {
    if (n_vars_ > 64) throw InvalidArgument("index evaluation supports at most 64 variables");
    Scalar acc = field_.zero();
    for (const auto& m : monomials_) {
        std::uint64_t mask = 0;
        for (auto v : m.vars) mask |= std::uint64_t{1} << (n_vars_ - 1 - v);
        if ((point & mask) == mask) acc = field_.add(acc, m.coeff);
    }
    return acc;
}

Scalar SparseMultilinearPoly::eval(const std::vector<int>& point) const {
    if (point.size() != n_vars_) throw InvalidArgument("evaluation point length mismatch");
    Scalar acc = field_.zero();
    for (const auto& m : monomials_) {
        bool on = true;
        for (auto v : m.vars)
            if (!point[v]) {
                on = false;
                break;
            }
        if (on) acc = field_.add(acc, m.coeff);
    }
    return acc;
}

Scalar SparseMultilinearPoly::eval_scalars(const std::vector<Scalar>& point) const {
    if (point.size() != n_vars_) throw InvalidArgument("evaluation point length mismatch");
    Scalar acc = field_.zero();
    for (const auto& m : monomials_) {
        Scalar t = m.coeff;
        for (auto v : m.vars) t = field_.mul(t, point[v]);
        acc = field_.add(acc, t);
    }
    return acc;
}

mpz_class WeightInterpolant::eval(long long w) const {
    mpz_class acc = 0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) acc += coeffs[j] * binomial(w, static_cast<long long>(j));
    return acc;
}

WeightInterpolant weight_interpolant(long long k, const std::vector<mpz_class>& targets) {
    if (targets.empty()) throw InvalidArgument("weight_interpolant needs at least one target");
    if (k < -1) throw InvalidArgument("weight_interpolant offset must be >= -1");
    const std::size_t r = targets.size();

    // Forward differences at the anchor k+1.
    std::vector<mpz_class> d = targets;
    for (std::size_t j = 1; j < r; ++j)
        for (std::size_t i = r - 1; i >= j; --i) d[i] -= d[i - 1];

    // Step the difference table down from anchor k+1 to anchor 0. The top
    // difference is constant, so each step is subtraction only; all values
    // stay integral.
    for (long long step = 0; step < k + 1; ++step)
        for (std::size_t j = r - 1; j-- > 0;) d[j] -= d[j + 1];

    WeightInterpolant w{k, std::move(d)};
    for (std::size_t i = 1; i <= r; ++i)
        if (w.eval(k + static_cast<long long>(i)) != targets[i - 1])
            throw InternalInvariant("weight interpolant does not reproduce its targets");
    return w;
}

std::vector<Scalar> field_weight_interpolant(long long k, const std::vector<Scalar>& targets,
                                             const FieldSpec& field) {
    if (targets.empty()) throw InvalidArgument("interpolation needs at least one target");
    if (k < -1) throw InvalidArgument("interpolation offset must be >= -1");
    const std::size_t r = targets.size();
    std::vector<Scalar> d = targets;
    for (std::size_t j = 1; j < r; ++j)
        for (std::size_t i = r - 1; i >= j; --i) d[i] = field.sub(d[i], d[i - 1]);
    for (long long step = 0; step < k + 1; ++step)
        for (std::size_t j = r - 1; j-- > 0;) d[j] = field.sub(d[j], d[j + 1]);
    return d;
}

namespace {

// Visits all size-j subsets of [0, n) in lexicographic order.
template <typename F>
void for_each_combination(std::uint32_t n, std::uint32_t j, F&& visit) {
    if (j > n) return;
    std::vector<std::uint32_t> idx(j);
    for (std::uint32_t i = 0; i < j; ++i) idx[i] = i;
    while (true) {
        visit(idx);
        std::uint32_t i = j;
        while (i-- > 0) {
            if (idx[i] != i + n - j) {
                ++idx[i];
                for (std::uint32_t l = i + 1; l < j; ++l) idx[l] = idx[l - 1] + 1;
                break;
            }
            if (i == 0) return;
        }
        if (j == 0) return;
    }
}

}  // namespace

SparseMultilinearPoly elementary_symmetric_poly(const std::vector<Scalar>& coeffs, std::uint32_t n,
                                                const FieldSpec& field) {
    if (coeffs.size() > static_cast<std::size_t>(n) + 1)
        throw InvalidArgument("interpolant degree exceeds variable count");
    std::map<std::vector<std::uint32_t>, Scalar> terms;
    for (std::uint32_t j = 0; j < coeffs.size(); ++j) {
        if (field.is_zero(coeffs[j])) continue;
        for_each_combination(n, j, [&](const std::vector<std::uint32_t>& vars) {
            terms.emplace(vars, coeffs[j]);
        });
    }
    return SparseMultilinearPoly::from_map(n, field, std::move(terms));
}

SparseMultilinearPoly interpolant_to_poly(const WeightInterpolant& w, std::uint32_t n,
                                          const FieldSpec& field) {
    if (static_cast<long long>(n) < static_cast<long long>(w.r()) - 1)
        throw InvalidArgument("interpolant_to_poly: need n >= r-1");
    std::vector<Scalar> coeffs;
    coeffs.reserve(w.coeffs.size());
    for (const auto& a : w.coeffs) coeffs.push_back(field.from_mpz(a));
    return elementary_symmetric_poly(coeffs, n, field);
}

SparseMultilinearPoly substitute_products(const SparseMultilinearPoly& p) {
    const std::uint32_t n = p.n_vars();
    std::map<std::vector<std::uint32_t>, Scalar> terms;
    for (const auto& m : p.monomials()) {
        std::vector<std::uint32_t> vars;
        vars.reserve(m.vars.size() * 2);
        for (auto v : m.vars) vars.push_back(v);
        for (auto v : m.vars) vars.push_back(n + v);
        terms.emplace(std::move(vars), m.coeff);
    }
    auto q = SparseMultilinearPoly::from_map(2 * n, p.field(), std::move(terms));
    if (q.monomial_count() != p.monomial_count())
        throw InternalInvariant("substitute_products changed the monomial count");
    return q;
}

SparseMultilinearPoly shifted_substitute(const SparseMultilinearPoly& p, std::uint64_t shift) {
    const std::uint32_t n = p.n_vars();
    if (n > 64) throw InvalidArgument("shift vectors support at most 64 variables");
    const FieldSpec& f = p.field();
    std::map<std::vector<std::uint32_t>, Scalar> terms;
    auto add = [&](std::vector<std::uint32_t> vars, const Scalar& c) {
        auto [it, fresh] = terms.emplace(std::move(vars), c);
        if (!fresh) it->second = f.add(it->second, c);
    };
    for (const auto& m : p.monomials()) {
        std::vector<std::uint32_t> keep, flip;
        for (auto v : m.vars) {
            if ((shift >> (n - 1 - v)) & 1)
                flip.push_back(v);
            else
                keep.push_back(v);
        }
        // prod_{flip} (1 - z_i) expands over subsets with alternating sign.
        const std::size_t fcount = flip.size();
        for (std::uint64_t t = 0; t < (std::uint64_t{1} << fcount); ++t) {
            std::vector<std::uint32_t> vars = keep;
            int bits = 0;
            for (std::size_t i = 0; i < fcount; ++i)
                if ((t >> i) & 1) {
                    vars.push_back(flip[i]);
                    ++bits;
                }
            std::sort(vars.begin(), vars.end());
            add(std::move(vars), (bits & 1) ? f.neg(m.coeff) : m.coeff);
        }
    }
    return SparseMultilinearPoly::from_map(n, f, std::move(terms));
}

FactoredMatrix poly_to_factored(const SparseMultilinearPoly& p, const Budget& budget) {
    if (p.n_vars() % 2 != 0)
        throw InvalidArgument("poly_to_factored expects a polynomial over x- and y-variables");
    const std::uint32_t n = p.n_vars() / 2;
    if (n > 30) throw InvalidArgument("poly_to_factored: 2^n index space too large");
    const std::size_t dim = std::size_t{1} << n;
    budget.charge(2 * static_cast<std::uint64_t>(p.monomial_count()) * dim, "poly_to_factored");
    const FieldSpec& f = p.field();
    FactoredMatrix out(dim, dim, f);
    for (const auto& m : p.monomials()) {
        std::uint64_t mx = 0, my = 0;
        for (auto v : m.vars) {
            if (v < n)
                mx |= std::uint64_t{1} << (n - 1 - v);
            else
                my |= std::uint64_t{1} << (n - 1 - (v - n));
        }
        ScalarVec left = ScalarVec::zeros(dim, f);
        ScalarVec right = ScalarVec::zeros(dim, f);
        const Scalar one = f.one();
        for (std::uint64_t x = 0; x < dim; ++x)
            if ((x & mx) == mx) left.set(x, one, f);
        for (std::uint64_t y = 0; y < dim; ++y)
            if ((y & my) == my) right.set(y, m.coeff, f);
        out.add_term(std::move(left), std::move(right));
    }
    return out;
}

SparseMultilinearPoly multilinear_extension(const std::vector<Scalar>& table,
                                            const FieldSpec& field) {
    const std::size_t len = table.size();
    if (len == 0 || (len & (len - 1)) != 0)
        throw InvalidArgument("truth table length must be a power of two");
    const std::uint32_t k = static_cast<std::uint32_t>(std::countr_zero(len));
    std::vector<Scalar> c = table;
    for (std::uint32_t b = 0; b < k; ++b) {
        const std::size_t bit = std::size_t{1} << b;
        for (std::size_t i = 0; i < len; ++i)
            if (i & bit) c[i] = field.sub(c[i], c[i ^ bit]);
    }
    std::map<std::vector<std::uint32_t>, Scalar> terms;
    for (std::size_t s = 0; s < len; ++s) {
        if (field.is_zero(c[s])) continue;
        std::vector<std::uint32_t> vars;
        for (std::uint32_t j = 0; j < k; ++j)
            if ((s >> (k - 1 - j)) & 1) vars.push_back(j);
        terms.emplace(std::move(vars), c[s]);
    }
    return SparseMultilinearPoly::from_map(k, field, std::move(terms));
}

SparseMultilinearPoly scale_poly(const SparseMultilinearPoly& p, const Scalar& c) {
    std::map<std::vector<std::uint32_t>, Scalar> terms;
    for (const auto& m : p.monomials()) terms.emplace(m.vars, p.field().mul(m.coeff, c));
    return SparseMultilinearPoly::from_map(p.n_vars(), p.field(), std::move(terms));
}

}  // namespace rigidlab
