#include "rigidlab/oracles.hpp"

#include <algorithm>

namespace rigidlab {

namespace {

void check_oracle_preconditions(const DenseMatrix& m, const OracleBudget& budget) {
    if (!m.field().is_prime())
        throw InvalidArgument("brute-force oracles need a finite field (enumeration over Q "
                              "is infinite)");
    if (static_cast<int>(std::max(m.rows(), m.cols())) > budget.max_dim)
        throw BudgetExceeded("matrix side exceeds the oracle dimension cap of " +
                             std::to_string(budget.max_dim));
}

std::size_t rank_u64(std::vector<std::uint64_t> a, std::size_t R, std::size_t C,
                     const FieldSpec& f) {
    std::size_t piv = 0;
    for (std::size_t c = 0; c < C && piv < R; ++c) {
        std::size_t sel = piv;
        while (sel < R && a[sel * C + c] == 0) ++sel;
        if (sel == R) continue;
        if (sel != piv)
            for (std::size_t j = c; j < C; ++j) std::swap(a[sel * C + j], a[piv * C + j]);
        const std::uint64_t inv = f.rinv(a[piv * C + c]);
        for (std::size_t i = piv + 1; i < R; ++i) {
            if (a[i * C + c] == 0) continue;
            const std::uint64_t factor = f.rmul(a[i * C + c], inv);
            a[i * C + c] = 0;
            for (std::size_t j = c + 1; j < C; ++j)
                a[i * C + j] = f.rsub(a[i * C + j], f.rmul(factor, a[piv * C + j]));
        }
        ++piv;
    }
    return piv;
}

}  // namespace

std::uint64_t brute_force_rigidity(const DenseMatrix& m, std::size_t r,
                                   const OracleBudget& budget) {
    check_oracle_preconditions(m, budget);
    const FieldSpec f = m.field();
    const std::size_t cells = m.rows() * m.cols();
    // p^cells candidates, capped by the enumeration budget.
    mpz_class space = 1;
    for (std::size_t i = 0; i < cells; ++i) space *= static_cast<unsigned long>(f.p);
    if (space > budget.max_enumeration)
        throw BudgetExceeded("candidate space p^(rows*cols) exceeds max_enumeration");

    const std::vector<std::uint64_t>& target = m.u();
    std::vector<std::uint64_t> cand(cells, 0);
    std::uint64_t best = cells + 1;
    while (true) {
        std::uint64_t dist = 0;
        for (std::size_t i = 0; i < cells && dist < best; ++i) dist += cand[i] != target[i];
        if (dist < best && rank_u64(cand, m.rows(), m.cols(), f) <= r) {
            best = dist;
            if (best == 0) break;
        }
        // odometer
        std::size_t pos = 0;
        while (pos < cells && ++cand[pos] == f.p) cand[pos++] = 0;
        if (pos == cells) break;
    }
    return best;
}

std::size_t min_rank_within(const DenseMatrix& m, std::uint64_t t, const OracleBudget& budget) {
    check_oracle_preconditions(m, budget);
    const FieldSpec f = m.field();
    const std::size_t cells = m.rows() * m.cols();
    t = std::min<std::uint64_t>(t, cells);

    // sum_j C(cells, j) (p-1)^j edit candidates, capped by the budget.
    {
        mpz_class total = 0, choose = 1, vals = 1;
        for (std::uint64_t j = 0; j <= t; ++j) {
            total += choose * vals;
            choose = choose * (cells - j) / (j + 1);
            vals *= f.p - 1;
        }
        if (total > budget.max_enumeration)
            throw BudgetExceeded("edit enumeration exceeds max_enumeration");
    }

    std::size_t best = rank_u64(m.u(), m.rows(), m.cols(), f);
    const std::size_t floor_rank = best > t ? best - t : 0;  // one edit drops rank by at most 1
    std::vector<std::size_t> pos;
    std::vector<std::uint64_t> delta;

    // Recursive enumeration of edit subsets of size <= t and value choices.
    auto recurse = [&](auto&& self, std::size_t start, std::uint64_t left) -> void {
        if (best == floor_rank) return;
        if (!pos.empty()) {
            std::vector<std::uint64_t> edited = m.u();
            for (std::size_t i = 0; i < pos.size(); ++i)
                edited[pos[i]] = f.radd(edited[pos[i]], delta[i]);
            best = std::min(best, rank_u64(std::move(edited), m.rows(), m.cols(), f));
        }
        if (left == 0) return;
        for (std::size_t p = start; p < cells; ++p) {
            pos.push_back(p);
            for (std::uint64_t d = 1; d < f.p; ++d) {
                delta.push_back(d);
                self(self, p + 1, left - 1);
                delta.pop_back();
            }
            pos.pop_back();
        }
    };
    recurse(recurse, 0, t);
    return best;
}

ConsistencyReport cross_validate(const DenseMatrix& m, const OracleBudget& budget) {
    ConsistencyReport rep;
    const std::size_t full_rank = rank(m);
    const std::size_t cells = m.rows() * m.cols();

    std::vector<std::uint64_t> rigidity(full_rank + 1);
    for (std::size_t r = 0; r <= full_rank; ++r) rigidity[r] = brute_force_rigidity(m, r, budget);

    std::vector<std::size_t> mrw(cells + 1);
    for (std::uint64_t t = 0; t <= cells; ++t) mrw[t] = min_rank_within(m, t, budget);

    auto fail = [&rep](std::string msg) {
        rep.ok = false;
        rep.violations.push_back(std::move(msg));
    };

    for (std::size_t r = 0; r + 1 <= full_rank; ++r)
        if (rigidity[r + 1] > rigidity[r]) fail("rigidity not non-increasing at r=" + std::to_string(r));
    for (std::uint64_t t = 0; t + 1 <= cells; ++t)
        if (mrw[t + 1] > mrw[t]) fail("min_rank_within not non-increasing at t=" + std::to_string(t));

    for (std::size_t r = 0; r <= full_rank; ++r)
        if (min_rank_within(m, rigidity[r], budget) > r)
            fail("min_rank_within(R(" + std::to_string(r) + ")) exceeds r");
    for (std::uint64_t t = 0; t <= cells; ++t) {
        const std::size_t rk = mrw[t];
        if (rk <= full_rank && rigidity[rk] > t)
            fail("R(min_rank_within(" + std::to_string(t) + ")) exceeds t");
    }
    return rep;
}

}  // namespace rigidlab
