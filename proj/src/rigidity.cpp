#include "rigidlab/rigidity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "rigidlab/binomial.hpp"
#include "rigidlab/rng.hpp"

namespace rigidlab {

namespace {

long long floor_q(const mpq_class& q) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return r.get_si();
}

long long ceil_q(const mpq_class& q) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return r.get_si();
}

}  // namespace

NonRigidityParams NonRigidityParams::defaults(int n, const mpq_class& eps, const FieldSpec& field) {
    if (!(eps > 0 && eps < mpq_class(1, 2)))
        throw InvalidArgument("eps must lie in (0, 1/2), got " + eps.get_str());
    NonRigidityParams p;
    p.n = n;
    p.eps = eps;
    p.field = field;
    const mpq_class half(1, 2);
    p.k_offset = ceil_q(2 * eps * n) - 1;
    const int lo = std::max(0LL, floor_q((half - eps) * n));
    const int hi = static_cast<int>(std::min<long long>(n, ceil_q((half + eps) * n)));
    p.window = WeightWindow(lo, hi);
    p.r_points = std::max(floor_q((half - eps) * n) + 1, hi - p.k_offset);
    p.validate();
    return p;
}

NonRigidityParams NonRigidityParams::full_window(int n, const FieldSpec& field) {
    NonRigidityParams p;
    p.n = n;
    p.field = field;
    p.k_offset = -1;
    p.r_points = n + 1;
    p.window = WeightWindow(0, n);
    p.validate();
    return p;
}

void NonRigidityParams::validate() const {
    if (n < 1 || n > 30) throw InvalidArgument("n out of range");
    HadamardSpec{n, field};  // rejects characteristic 2 with its diagnostic
    if (k_offset < -1) throw InvalidArgument("k_offset must be >= -1");
    if (r_points < 1) throw InvalidArgument("r_points must be >= 1");
    if (k_offset + r_points > n)
        throw InvalidArgument("interpolation needs n >= k_offset + r_points");
    if (window.lo < 0 || window.hi > n) throw InvalidArgument("weight window must lie in [0, n]");
}

ordered_json NonRigidityParams::to_json() const {
    ordered_json j;
    j["n"] = n;
    if (eps != 0) j["eps"] = eps.get_str();
    j["k_offset"] = k_offset;
    j["r_points"] = r_points;
    j["window"] = {window.lo, window.hi};
    j["field"] = field.name();
    return j;
}

namespace {

std::vector<mpz_class> sign_targets(long long k, long long r) {
    std::vector<mpz_class> t;
    t.reserve(r);
    for (long long i = 1; i <= r; ++i) t.emplace_back(((k + i) % 2 == 0) ? 1 : -1);
    return t;
}

struct WindowConstruction {
    WeightInterpolant interp;
    SparseMultilinearPoly xy_poly;
};

WindowConstruction build_window_poly(const NonRigidityParams& params) {
    params.validate();
    WeightInterpolant interp =
        weight_interpolant(params.k_offset, sign_targets(params.k_offset, params.r_points));
    SparseMultilinearPoly zpoly =
        interpolant_to_poly(interp, static_cast<std::uint32_t>(params.n), params.field);
    return WindowConstruction{std::move(interp), substitute_products(zpoly)};
}

// Overlap values s outside the exactness range where the reduced interpolant
// value differs from (-1)^s in the field. Only these can produce diffs.
std::vector<long long> compute_wrong_overlaps(const WeightInterpolant& interp,
                                              const NonRigidityParams& params) {
    std::vector<long long> wrong;
    for (long long s = 0; s <= params.window.hi; ++s) {
        if (s > params.k_offset && s <= params.k_offset + params.r_points) continue;
        const Scalar got = params.field.from_mpz(interp.eval(s));
        const Scalar want = (s % 2 == 0) ? params.field.one() : params.field.minus_one();
        if (got != want) wrong.push_back(s);
    }
    return wrong;
}

mpz_class wrong_count_for_weight(int n, int wx, const std::vector<long long>& wrong,
                                 const WeightWindow& window) {
    mpz_class total = 0;
    for (int w = std::max(0, window.lo); w <= std::min(n, window.hi); ++w)
        for (long long s : wrong) total += binomial(wx, s) * binomial(n - wx, w - s);
    return total;
}

void measure_against_target(const FactoredMatrix& f, const EntryOracle& target,
                            const Budget& budget, RigidityReport& report) {
    const std::uint64_t cells = static_cast<std::uint64_t>(f.rows()) * f.cols();
    if (!budget.fits(2 * cells)) return;  // factored-only report
    DenseMatrix m = materialize(f, budget);
    report.realized_rank = rank(m);
    report.row_diffs.assign(f.rows(), 0);
    std::uint64_t total = 0;
    for (std::size_t r = 0; r < f.rows(); ++r) {
        std::uint64_t d = 0;
        for (std::size_t c = 0; c < f.cols(); ++c)
            if (m.at(r, c) != target(r, c)) ++d;
        report.row_diffs[r] = d;
        total += d;
    }
    report.total_diffs = total;
    report.max_row_diffs = *std::max_element(report.row_diffs.begin(), report.row_diffs.end());
}

}  // namespace

SparseMultilinearPoly ip2_window_poly(const NonRigidityParams& params) {
    return build_window_poly(params).xy_poly;
}

ValiantResult valiant_nonrigidity(const NonRigidityParams& params, const Budget& budget) {
    WindowConstruction wc = build_window_poly(params);
    FactoredMatrix base = poly_to_factored(wc.xy_poly, budget);

    const HadamardSpec hspec{params.n, params.field};
    const auto bad = out_of_window_indices(params.n, params.window);
    FactoredMatrix corrected = correct_rows_columns(base, hadamard_oracle(hspec), bad, bad);

    RigidityReport report;
    report.n = params.n;
    report.field = params.field;
    report.params = params.to_json();
    report.monomial_count = wc.xy_poly.monomial_count();
    report.correction_count = 2 * bad.size();
    report.claimed_rank_bound = report.monomial_count + report.correction_count;
    if (corrected.term_count() != report.claimed_rank_bound)
        throw InternalInvariant("correction term accounting mismatch");

    report.wrong_overlaps = compute_wrong_overlaps(wc.interp, params);
    mpz_class bound = 0, exact = 0, total = 0;
    for (int wx = std::max(0, params.window.lo); wx <= std::min(params.n, params.window.hi); ++wx) {
        mpz_class b = low_ip_count(params.n, wx, params.k_offset, params.window);
        mpz_class e = wrong_count_for_weight(params.n, wx, report.wrong_overlaps, params.window);
        bound = std::max(bound, b);
        exact = std::max(exact, e);
        total += binomial(params.n, wx) * e;
    }
    report.per_row_diff_bound = bound;
    report.per_row_diff_exact = exact;
    report.total_diff_exact = total;

    measure_against_target(corrected, hadamard_oracle(hspec), budget, report);
    return ValiantResult{std::move(corrected), std::move(report)};
}

long long hoeffding_half_width(int n, const mpq_class& eps) {
    if (!(eps > 0)) throw InvalidArgument("eps must be positive");
    if (eps >= 2) return 0;
    const double e = eps.get_d();
    long long t = static_cast<long long>(std::ceil(std::sqrt(n * std::log(2.0 / e) / 2.0)));
    if (t < 0) t = 0;
    // Guard against floating-point edges of the ceiling.
    while (2.0 * std::exp(-2.0 * double(t) * double(t) / n) > e) ++t;
    while (t > 0 && 2.0 * std::exp(-2.0 * double(t - 1) * double(t - 1) / n) <= e) --t;
    return t;
}

WeightWindow centered_window(int n, long long t) {
    long long lo = n - 2 * t <= 0 ? 0 : (n - 2 * t + 1) / 2;
    long long hi = std::min<long long>(n, (n + 2 * t) / 2);
    return WeightWindow(static_cast<int>(lo), static_cast<int>(hi));
}

SparseMultilinearPoly parity_prob_poly(int n, const mpq_class& eps, std::uint64_t seed,
                                       const FieldSpec& field) {
    if (!(eps > 0 && eps <= 1)) throw InvalidArgument("eps must lie in (0, 1]");
    if (n < 1 || n > 30) throw InvalidArgument("n out of range");
    const long long t = hoeffding_half_width(n, eps);
    const WeightWindow window = centered_window(n, t);
    const long long k = window.lo - 1;
    const long long r = window.hi - window.lo + 1;

    WeightInterpolant interp = weight_interpolant(k, sign_targets(k, r));
    SparseMultilinearPoly zpoly = interpolant_to_poly(interp, static_cast<std::uint32_t>(n), field);

    Rng rng(derive_seed(seed, "parity-shift", 0));
    const std::uint64_t shift = rng.bits(n);
    SparseMultilinearPoly shifted = shifted_substitute(zpoly, shift);
    if (std::popcount(shift) & 1) shifted = scale_poly(shifted, field.minus_one());
    return shifted;
}

namespace {

RigidityReport high_error_report(int n, const FieldSpec& field, ordered_json params,
                                 const SparseMultilinearPoly& xy, long long t) {
    RigidityReport report;
    report.n = n;
    report.field = field;
    report.params = std::move(params);
    report.monomial_count = xy.monomial_count();
    report.claimed_rank_bound = report.monomial_count;
    report.half_width_t = t;
    report.monomial_bound = binomial_sum(n, 2 * t + 1);
    if (mpz_class(static_cast<unsigned long>(report.monomial_count)) > *report.monomial_bound)
        throw InternalInvariant("monomial count exceeds the degree bound");
    return report;
}

}  // namespace

ValiantResult high_error_nonrigidity(int n, std::uint64_t r_target, std::uint64_t seed,
                                     const FieldSpec& field, const Budget& budget) {
    HadamardSpec hspec{n, field};
    if (r_target < 1) throw InvalidArgument("rank target must be >= 1");
    mpz_class limit = mpz_class(1) << (2 * n);
    if (mpz_class(static_cast<unsigned long>(r_target)) > limit)
        throw InvalidArgument("rank target must be <= 2^(2n)");
    const mpq_class eps(1, r_target);

    SparseMultilinearPoly p = parity_prob_poly(n, eps, seed, field);
    SparseMultilinearPoly xy = substitute_products(p);
    FactoredMatrix f = poly_to_factored(xy, budget);

    ordered_json params;
    params["n"] = n;
    params["r_target"] = r_target;
    params["eps"] = eps.get_str();
    params["seed"] = seed;
    params["field"] = field.name();
    RigidityReport report =
        high_error_report(n, field, std::move(params), xy, hoeffding_half_width(n, eps));
    measure_against_target(f, hadamard_oracle(hspec), budget, report);
    return ValiantResult{std::move(f), std::move(report)};
}

SymmetricFunctionSpec SymmetricFunctionSpec::parity(int n, const FieldSpec& field) {
    SymmetricFunctionSpec s{n, field, {}};
    for (int w = 0; w <= n; ++w) s.values.push_back(w % 2 ? field.minus_one() : field.one());
    return s;
}

SymmetricFunctionSpec SymmetricFunctionSpec::majority(int n, const FieldSpec& field) {
    SymmetricFunctionSpec s{n, field, {}};
    for (int w = 0; w <= n; ++w) s.values.push_back(2 * w > n ? field.one() : field.zero());
    return s;
}

SymmetricFunctionSpec SymmetricFunctionSpec::constant(int n, const FieldSpec& field,
                                                      const Scalar& c) {
    SymmetricFunctionSpec s{n, field, {}};
    s.values.assign(n + 1, c);
    return s;
}

void SymmetricFunctionSpec::validate() const {
    if (n < 1 || n > 30) throw InvalidArgument("n out of range");
    if (values.size() != static_cast<std::size_t>(n) + 1)
        throw InvalidArgument("symmetric spec needs n+1 weight values");
}

Scalar SymmetricFunctionSpec::target_entry(std::uint64_t x, std::uint64_t y) const {
    return values[std::popcount(x & y)];
}

ValiantResult sym_and_nonrigidity(const SymmetricFunctionSpec& spec, std::uint64_t r_target,
                                  std::uint64_t seed, const Budget& budget) {
    spec.validate();
    if (r_target < 1) throw InvalidArgument("rank target must be >= 1");
    const FieldSpec& field = spec.field;
    const mpq_class eps(1, r_target);
    const long long t = hoeffding_half_width(spec.n, eps);
    const WeightWindow window = centered_window(spec.n, t);

    bool is_constant = true, is_alternating = true;
    for (int w = 0; w < spec.n; ++w) {
        if (spec.values[w + 1] != spec.values[w]) is_constant = false;
        if (spec.values[w + 1] != field.neg(spec.values[w])) is_alternating = false;
    }
    const bool full_cover = window.lo == 0 && window.hi == spec.n;

    SparseMultilinearPoly zpoly(static_cast<std::uint32_t>(spec.n), field);
    if (is_constant) {
        std::map<std::vector<std::uint32_t>, Scalar> terms;
        terms.emplace(std::vector<std::uint32_t>{}, spec.values[0]);
        zpoly = SparseMultilinearPoly::from_map(static_cast<std::uint32_t>(spec.n), field,
                                                std::move(terms));
    } else if (is_alternating) {
        // Character target c*(-1)^w: the XOR shift twists by the sign of the
        // shift only, so the parity construction transfers verbatim.
        zpoly = parity_prob_poly(spec.n, eps, seed, field);
        if (spec.values[0] != field.one()) zpoly = scale_poly(zpoly, spec.values[0]);
    } else {
        // No weight-translation identity is available for a general symmetric
        // profile, so the sample is the deterministic mid-window interpolant;
        // entries whose overlap escapes the window are counted as diffs.
        std::vector<Scalar> targets(spec.values.begin() + window.lo,
                                    spec.values.begin() + window.hi + 1);
        std::vector<Scalar> coeffs = field_weight_interpolant(window.lo - 1, targets, field);
        zpoly = elementary_symmetric_poly(coeffs, static_cast<std::uint32_t>(spec.n), field);
    }

    SparseMultilinearPoly xy = substitute_products(zpoly);
    FactoredMatrix f = poly_to_factored(xy, budget);

    ordered_json params;
    params["n"] = spec.n;
    params["r_target"] = r_target;
    params["eps"] = eps.get_str();
    params["seed"] = seed;
    params["field"] = field.name();
    RigidityReport report = high_error_report(spec.n, field, std::move(params), xy, t);
    report.per_entry_contract = is_constant || is_alternating || full_cover;
    measure_against_target(
        f, [&spec](std::size_t r, std::size_t c) { return spec.target_entry(r, c); }, budget,
        report);
    return ValiantResult{std::move(f), std::move(report)};
}

ordered_json RigidityReport::to_json() const {
    ordered_json j;
    j["n"] = n;
    j["field"] = field.name();
    j["params"] = params;
    j["monomial_count"] = monomial_count;
    j["correction_count"] = correction_count;
    j["claimed_rank_bound"] = claimed_rank_bound;
    if (per_row_diff_bound) {
        j["wrong_overlaps"] = wrong_overlaps;
        j["per_row_diff_bound"] = per_row_diff_bound->get_str();
        j["per_row_diff_exact"] = per_row_diff_exact->get_str();
        j["total_diff_exact"] = total_diff_exact->get_str();
    }
    if (half_width_t) {
        j["half_width_t"] = *half_width_t;
        j["monomial_bound"] = monomial_bound->get_str();
    }
    if (per_entry_contract) j["per_entry_contract"] = *per_entry_contract;
    if (realized_rank) j["realized_rank"] = *realized_rank;
    if (total_diffs) j["total_diffs"] = *total_diffs;
    if (max_row_diffs) j["max_row_diffs"] = *max_row_diffs;
    return j;
}

std::string RigidityReport::row_diffs_csv() const {
    std::string out = "row,weight,diffs\n";
    for (std::size_t r = 0; r < row_diffs.size(); ++r) {
        out += std::to_string(r);
        out += ',';
        out += std::to_string(std::popcount(r));
        out += ',';
        out += std::to_string(row_diffs[r]);
        out += '\n';
    }
    return out;
}

}  // namespace rigidlab
