#include "rigidlab/prob_rank.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "rigidlab/rng.hpp"

namespace rigidlab {

bool ProbMatrixSampler::agrees(const Scalar& value, const Scalar& tgt) const {
    if (!sign_mode) return value == tgt;
    const bool nonpositive = sgn(value.rational()) <= 0;
    const bool circuit_true = !field.is_zero(tgt);
    return nonpositive == circuit_true;
}

int eq_hash_count(const mpq_class& eps) {
    if (!(eps > 0 && eps < 1)) throw InvalidArgument("eps must lie in (0, 1)");
    int k = 0;
    mpz_class pow = 1;
    while (pow * eps.get_num() < eps.get_den()) {
        pow <<= 1;
        ++k;
    }
    return k;
}

namespace {

std::vector<std::uint64_t> eq_subsets_from_seed(int n, int k, std::uint64_t seed) {
    Rng rng(derive_seed(seed, "eq-hash", 0));
    std::vector<std::uint64_t> subsets(k);
    for (int i = 0; i < k; ++i) subsets[i] = rng.bits(n);
    return subsets;
}

std::uint64_t hash_vec(std::uint64_t x, const std::vector<std::uint64_t>& subsets) {
    std::uint64_t h = 0;
    for (std::size_t i = 0; i < subsets.size(); ++i)
        h |= static_cast<std::uint64_t>(std::popcount(x & subsets[i]) & 1) << i;
    return h;
}

}  // namespace

FactoredMatrix eq_sample_from_subsets(int n, const std::vector<std::uint64_t>& subsets,
                                      const FieldSpec& field) {
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t k = subsets.size();
    FactoredMatrix f(dim, dim, field);
    std::vector<std::uint64_t> hv(dim);
    for (std::size_t x = 0; x < dim; ++x) hv[x] = hash_vec(x, subsets);
    const Scalar one = field.one();
    for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << k); ++pat) {
        ScalarVec bucket = ScalarVec::zeros(dim, field);
        bool used = false;
        for (std::size_t x = 0; x < dim; ++x)
            if (hv[x] == pat) {
                bucket.set(x, one, field);
                used = true;
            }
        if (used) f.add_term(bucket, bucket);
    }
    return f;
}

ProbMatrixSampler eq_sampler(int n, const mpq_class& eps, const FieldSpec& field) {
    if (n < 0 || n > 30) throw InvalidArgument("n out of range");
    const int k = eq_hash_count(eps);
    const std::size_t dim = std::size_t{1} << n;

    ProbMatrixSampler s;
    s.rows = s.cols = dim;
    s.field = field;
    s.claimed_rank = std::size_t{1} << k;
    mpq_class exact(1);
    exact /= mpq_class(mpz_class(1) << k);
    s.claimed_error = exact;
    s.sample = [n, k, field](std::uint64_t seed) {
        return eq_sample_from_subsets(n, eq_subsets_from_seed(n, k, seed), field);
    };
    s.entry = [n, k, field](std::uint64_t seed, std::size_t x, std::size_t y) {
        const auto subsets = eq_subsets_from_seed(n, k, seed);
        return hash_vec(x, subsets) == hash_vec(y, subsets) ? field.one() : field.zero();
    };
    s.target = [field](std::size_t x, std::size_t y) {
        return x == y ? field.one() : field.zero();
    };
    return s;
}

namespace {

struct LeqHashes {
    // prefix_hashes[i] are the k subsets for the equality check on the top
    // i bits; full_hashes (non-strict only) guard the diagonal.
    std::vector<std::vector<std::uint64_t>> prefix_hashes;
    std::vector<std::uint64_t> full_hashes;
};

LeqHashes leq_hashes_from_seed(int n, int k, bool strict, std::uint64_t seed) {
    Rng rng(derive_seed(seed, "leq-hash", 0));
    LeqHashes h;
    h.prefix_hashes.resize(n);
    for (int i = 1; i <= n; ++i) {
        const int m = i - 1;  // prefix length
        h.prefix_hashes[i - 1].resize(k);
        for (int j = 0; j < k; ++j) h.prefix_hashes[i - 1][j] = rng.bits(m) << (n - m);
    }
    if (!strict) {
        h.full_hashes.resize(k);
        for (int j = 0; j < k; ++j) h.full_hashes[j] = rng.bits(n);
    }
    return h;
}

}  // namespace

ProbMatrixSampler leq_sampler(int n, const mpq_class& eps, const FieldSpec& field, bool strict) {
    if (n < 1 || n > 30) throw InvalidArgument("n out of range");
    if (!(eps > 0 && eps < 1)) throw InvalidArgument("eps must lie in (0, 1)");
    const int events = strict ? n : n + 1;
    const int k = eq_hash_count(eps / events);
    const std::size_t dim = std::size_t{1} << n;

    ProbMatrixSampler s;
    s.rows = s.cols = dim;
    s.field = field;
    s.claimed_rank = static_cast<std::size_t>(events) << k;
    mpq_class exact(events);
    exact /= mpq_class(mpz_class(1) << k);
    s.claimed_error = exact;
    s.sample = [n, k, strict, field, dim](std::uint64_t seed) {
        const LeqHashes h = leq_hashes_from_seed(n, k, strict, seed);
        FactoredMatrix f(dim, dim, field);
        const Scalar one = field.one();
        std::vector<std::uint64_t> hv(dim);
        for (int i = 1; i <= n; ++i) {
            for (std::size_t x = 0; x < dim; ++x) hv[x] = hash_vec(x, h.prefix_hashes[i - 1]);
            const std::uint64_t bit = std::uint64_t{1} << (n - i);
            for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << k); ++pat) {
                ScalarVec left = ScalarVec::zeros(dim, field);
                ScalarVec right = ScalarVec::zeros(dim, field);
                bool lused = false, rused = false;
                for (std::size_t v = 0; v < dim; ++v) {
                    if (hv[v] != pat) continue;
                    if (!(v & bit)) {
                        left.set(v, one, field);
                        lused = true;
                    } else {
                        right.set(v, one, field);
                        rused = true;
                    }
                }
                if (lused && rused) f.add_term(std::move(left), std::move(right));
            }
        }
        if (!strict) {
            for (std::size_t x = 0; x < dim; ++x) hv[x] = hash_vec(x, h.full_hashes);
            for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << k); ++pat) {
                ScalarVec bucket = ScalarVec::zeros(dim, field);
                bool used = false;
                for (std::size_t v = 0; v < dim; ++v)
                    if (hv[v] == pat) {
                        bucket.set(v, one, field);
                        used = true;
                    }
                if (used) f.add_term(bucket, bucket);
            }
        }
        return f;
    };
    s.entry = [n, k, strict, field](std::uint64_t seed, std::size_t x, std::size_t y) {
        const LeqHashes h = leq_hashes_from_seed(n, k, strict, seed);
        std::uint64_t acc = 0;
        for (int i = 1; i <= n; ++i) {
            const std::uint64_t bit = std::uint64_t{1} << (n - i);
            if ((x & bit) || !(y & bit)) continue;
            if (hash_vec(x, h.prefix_hashes[i - 1]) == hash_vec(y, h.prefix_hashes[i - 1])) ++acc;
        }
        if (!strict && hash_vec(x, h.full_hashes) == hash_vec(y, h.full_hashes)) ++acc;
        Scalar v = field.zero();
        for (std::uint64_t i = 0; i < acc; ++i) v = field.add(v, field.one());
        return v;
    };
    s.target = [strict, field](std::size_t x, std::size_t y) {
        const bool t = strict ? x < y : x <= y;
        return t ? field.one() : field.zero();
    };
    return s;
}

bool LTFSpec::eval(std::uint64_t x, std::uint64_t y) const {
    const int m = n();
    long long acc = 0;
    for (int j = 0; j < m; ++j) {
        const std::uint64_t bit = std::uint64_t{1} << (m - 1 - j);
        if (x & bit) acc += x_weights[j];
        if (y & bit) acc += y_weights[j];
    }
    return acc >= threshold;
}

ordered_json LTFSpec::to_json() const {
    return ordered_json{
        {"x_weights", x_weights}, {"y_weights", y_weights}, {"threshold", threshold}};
}

LTFSpec LTFSpec::from_json(const ordered_json& j) {
    LTFSpec s;
    s.x_weights = j.at("x_weights").get<std::vector<long long>>();
    s.y_weights = j.at("y_weights").get<std::vector<long long>>();
    s.threshold = j.at("threshold").get<long long>();
    if (s.x_weights.size() != s.y_weights.size())
        throw InvalidArgument("LTF weight vectors must have equal length");
    return s;
}

ProbMatrixSampler ltf_sampler(const LTFSpec& spec, const mpq_class& eps, const FieldSpec& field,
                              const Budget& budget) {
    const int n = spec.n();
    if (n < 1 || n > 24) throw InvalidArgument("ltf_sampler: n out of range");
    if (spec.x_weights.size() != spec.y_weights.size())
        throw InvalidArgument("LTF weight vectors must have equal length");
    const std::size_t dim = std::size_t{1} << n;
    budget.charge(4 * dim, "ltf_sampler index tables");

    // a(x) = sum v_i x_i, b(y) = threshold - sum w_i y_i, so f = [a(x) <= b(y)].
    std::vector<long long> a(dim, 0), b(dim, 0);
    for (std::size_t v = 0; v < dim; ++v) {
        long long sa = 0, sb = 0;
        for (int j = 0; j < n; ++j) {
            const std::uint64_t bit = std::uint64_t{1} << (n - 1 - j);
            if (v & bit) {
                sa += spec.x_weights[j];
                sb += spec.y_weights[j];
            }
        }
        a[v] = sa;
        b[v] = spec.threshold - sb;
    }
    std::vector<long long> sorted;
    sorted.reserve(2 * dim);
    sorted.insert(sorted.end(), a.begin(), a.end());
    sorted.insert(sorted.end(), b.begin(), b.end());
    std::sort(sorted.begin(), sorted.end());
    auto earliest = [&sorted](long long v) {
        return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), v) -
                                        sorted.begin());
    };
    auto alpha = std::make_shared<std::vector<std::size_t>>(dim);
    auto beta = std::make_shared<std::vector<std::size_t>>(dim);
    for (std::size_t v = 0; v < dim; ++v) {
        (*alpha)[v] = earliest(a[v]);
        (*beta)[v] = earliest(b[v]);
    }

    ProbMatrixSampler inner = leq_sampler(n + 1, eps, field);
    ProbMatrixSampler s;
    s.rows = s.cols = dim;
    s.field = field;
    s.claimed_rank = inner.claimed_rank;
    s.claimed_error = inner.claimed_error;
    s.sample = [inner, alpha, beta, dim, field](std::uint64_t seed) {
        FactoredMatrix base = inner.sample(seed);
        FactoredMatrix f(dim, dim, field);
        for (std::size_t t = 0; t < base.term_count(); ++t) {
            ScalarVec left = ScalarVec::zeros(dim, field);
            ScalarVec right = ScalarVec::zeros(dim, field);
            bool lused = false, rused = false;
            for (std::size_t v = 0; v < dim; ++v) {
                Scalar lv = base.left(t).at((*alpha)[v], field);
                Scalar rv = base.right(t).at((*beta)[v], field);
                if (!field.is_zero(lv)) {
                    left.set(v, lv, field);
                    lused = true;
                }
                if (!field.is_zero(rv)) {
                    right.set(v, rv, field);
                    rused = true;
                }
            }
            if (lused && rused) f.add_term(std::move(left), std::move(right));
        }
        return f;
    };
    s.entry = [inner, alpha, beta](std::uint64_t seed, std::size_t x, std::size_t y) {
        return inner.entry(seed, (*alpha)[x], (*beta)[y]);
    };
    auto av = std::make_shared<std::vector<long long>>(std::move(a));
    auto bv = std::make_shared<std::vector<long long>>(std::move(b));
    s.target = [av, bv, field](std::size_t x, std::size_t y) {
        return (*av)[x] <= (*bv)[y] ? field.one() : field.zero();
    };
    return s;
}

bool DepthTwoLTFCircuit::eval(std::uint64_t x, std::uint64_t y) const {
    long long acc = 0;
    for (std::size_t i = 0; i < gates.size(); ++i)
        if (gates[i].eval(x, y)) acc += top_weights[i];
    return acc <= top_threshold;
}

void DepthTwoLTFCircuit::validate() const {
    if (gates.empty()) throw InvalidArgument("circuit needs at least one gate");
    if (top_weights.size() != gates.size())
        throw InvalidArgument("top weight count must match gate count");
    for (const auto& g : gates)
        if (g.n() != gates.front().n() ||
            g.x_weights.size() != g.y_weights.size())
            throw InvalidArgument("all gates must read the same input split");
}

ordered_json DepthTwoLTFCircuit::to_json() const {
    ordered_json j;
    j["gates"] = ordered_json::array();
    for (const auto& g : gates) j["gates"].push_back(g.to_json());
    j["top_weights"] = top_weights;
    j["top_threshold"] = top_threshold;
    return j;
}

DepthTwoLTFCircuit DepthTwoLTFCircuit::from_json(const ordered_json& j) {
    DepthTwoLTFCircuit c;
    for (const auto& g : j.at("gates")) c.gates.push_back(LTFSpec::from_json(g));
    c.top_weights = j.at("top_weights").get<std::vector<long long>>();
    c.top_threshold = j.at("top_threshold").get<long long>();
    c.validate();
    return c;
}

ProbMatrixSampler ltf_ltf_sign_sampler(const DepthTwoLTFCircuit& circuit, const mpq_class& eps,
                                       const Budget& budget) {
    circuit.validate();
    const FieldSpec field = FieldSpec::rationals();
    const std::size_t s_count = circuit.gates.size();
    const mpq_class gate_eps = eps / static_cast<unsigned long>(s_count);
    auto gate_samplers = std::make_shared<std::vector<ProbMatrixSampler>>();
    for (const auto& g : circuit.gates)
        gate_samplers->push_back(ltf_sampler(g, gate_eps, field, budget));
    const std::size_t dim = std::size_t{1} << circuit.n();

    ProbMatrixSampler s;
    s.rows = s.cols = dim;
    s.field = field;
    s.sign_mode = true;
    s.claimed_rank = 1;
    s.claimed_error = 0;
    for (const auto& g : *gate_samplers) {
        s.claimed_rank += g.claimed_rank;
        s.claimed_error += g.claimed_error;
    }
    auto weights = std::make_shared<std::vector<long long>>(circuit.top_weights);
    const long long k_top = circuit.top_threshold;
    s.sample = [gate_samplers, weights, k_top, dim, field](std::uint64_t seed) {
        FactoredMatrix f(dim, dim, field);
        std::vector<Scalar> ones(dim, field.one());
        std::vector<Scalar> shifted(dim, field.from_int(-k_top));
        f.add_term(shifted, ones);
        for (std::size_t i = 0; i < gate_samplers->size(); ++i) {
            FactoredMatrix gi = (*gate_samplers)[i].sample(derive_seed(seed, "gate", i));
            const Scalar w = field.from_int((*weights)[i]);
            for (std::size_t t = 0; t < gi.term_count(); ++t) {
                ScalarVec left = gi.left(t);
                for (std::size_t v = 0; v < dim; ++v)
                    left.set(v, field.mul(left.at(v, field), w), field);
                f.add_term(std::move(left), gi.right(t));
            }
        }
        return f;
    };
    s.entry = [gate_samplers, weights, k_top, field](std::uint64_t seed, std::size_t x,
                                                     std::size_t y) {
        Scalar acc = field.from_int(-k_top);
        for (std::size_t i = 0; i < gate_samplers->size(); ++i) {
            const Scalar g = (*gate_samplers)[i].entry(derive_seed(seed, "gate", i), x, y);
            acc = field.add(acc, field.mul(field.from_int((*weights)[i]), g));
        }
        return acc;
    };
    auto circ = std::make_shared<DepthTwoLTFCircuit>(circuit);
    s.target = [circ, field](std::size_t x, std::size_t y) {
        return circ->eval(x, y) ? field.one() : field.zero();
    };
    return s;
}

ErrorReport estimate_error(const ProbMatrixSampler& sampler, ErrorEstimateMode mode,
                           std::uint64_t trials, std::uint64_t seed, double delta,
                           const Budget& budget) {
    if (trials == 0) throw InvalidArgument("estimate_error needs trials >= 1");
    const std::uint64_t cells = static_cast<std::uint64_t>(sampler.rows) * sampler.cols;
    if (mode == ErrorEstimateMode::Exhaustive)
        budget.charge(cells * trials, "exhaustive error estimation");
    else
        budget.charge(cells, "error counters");

    ErrorReport rep;
    rep.rows = sampler.rows;
    rep.cols = sampler.cols;
    rep.trials = trials;
    rep.mode = mode;
    rep.delta = delta;
    rep.per_entry_errors.assign(cells, 0);
    rep.per_entry_trials.assign(cells, 0);

    if (mode == ErrorEstimateMode::Exhaustive) {
        for (std::uint64_t t = 0; t < trials; ++t) {
            const std::uint64_t sd = derive_seed(seed, "trial", t);
            for (std::size_t x = 0; x < sampler.rows; ++x)
                for (std::size_t y = 0; y < sampler.cols; ++y) {
                    const std::size_t idx = x * sampler.cols + y;
                    ++rep.per_entry_trials[idx];
                    if (!sampler.agrees(sampler.entry(sd, x, y), sampler.target(x, y)))
                        ++rep.per_entry_errors[idx];
                }
        }
    } else {
        Rng pick(derive_seed(seed, "mc-pick", 0));
        for (std::uint64_t t = 0; t < trials; ++t) {
            const std::size_t x = pick.below(sampler.rows);
            const std::size_t y = pick.below(sampler.cols);
            const std::uint64_t sd = derive_seed(seed, "trial", t);
            const std::size_t idx = x * sampler.cols + y;
            ++rep.per_entry_trials[idx];
            if (!sampler.agrees(sampler.entry(sd, x, y), sampler.target(x, y)))
                ++rep.per_entry_errors[idx];
        }
    }

    std::uint64_t min_visits = trials;
    for (std::size_t i = 0; i < cells; ++i) {
        if (rep.per_entry_trials[i] == 0) {
            min_visits = 0;
            continue;
        }
        min_visits = std::min(min_visits, rep.per_entry_trials[i]);
        const double rate = double(rep.per_entry_errors[i]) / double(rep.per_entry_trials[i]);
        if (rate > rep.max_error) {
            rep.max_error = rate;
            rep.argmax_row = i / sampler.cols;
            rep.argmax_col = i % sampler.cols;
        }
    }
    const double t_eff = mode == ErrorEstimateMode::Exhaustive
                             ? double(trials)
                             : double(std::max<std::uint64_t>(min_visits, 1));
    rep.hoeffding_radius = std::sqrt(std::log(2.0 * double(cells) / delta) / (2.0 * t_eff));
    return rep;
}

ordered_json ErrorReport::to_json(bool include_histogram) const {
    ordered_json j;
    j["rows"] = rows;
    j["cols"] = cols;
    j["trials"] = trials;
    j["mode"] = mode == ErrorEstimateMode::Exhaustive ? "exhaustive" : "monte-carlo";
    j["delta"] = delta;
    j["max_error"] = max_error;
    j["argmax_entry"] = {argmax_row, argmax_col};
    j["hoeffding_radius"] = hoeffding_radius;
    if (include_histogram) {
        j["per_entry_errors"] = per_entry_errors;
        j["per_entry_trials"] = per_entry_trials;
    }
    return j;
}

}  // namespace rigidlab
