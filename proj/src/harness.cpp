#include "rigidlab/harness.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "rigidlab/equivalence.hpp"
#include "rigidlab/hadamard.hpp"
#include "rigidlab/oracles.hpp"
#include "rigidlab/prob_rank.hpp"
#include "rigidlab/rigidity.hpp"
#include "rigidlab/rng.hpp"

namespace rigidlab {

namespace {

struct HelpRequested {
    std::string text;
};

mpq_class require_eps(const ExperimentConfig& c) {
    if (!c.eps) throw InvalidArgument(c.command + " requires --eps");
    return *c.eps;
}

std::uint64_t require_rank_target(const ExperimentConfig& c) {
    if (!c.rank_target) throw InvalidArgument(c.command + " requires --rank-target");
    return *c.rank_target;
}

}  // namespace

ordered_json ExperimentConfig::echo() const {
    ordered_json j;
    j["command"] = command;
    j["n"] = n;
    j["field"] = field.name();
    if (eps) j["eps"] = eps->get_str();
    if (rank_target) j["rank_target"] = *rank_target;
    j["seed"] = seed;
    if (trials) j["trials"] = trials;
    j["format"] = format;
    if (command == "valiant") j["full_window"] = full_window;
    if (command == "sym-and") j["sym"] = sym;
    if (command == "prob-rank") {
        if (!circuit_path.empty())
            j["circuit"] = circuit_path;
        else
            j["sampler"] = sampler;
        j["mode"] = mode;
        j["delta"] = delta;
    }
    if (command == "protocol") {
        j["x"] = x ? *x : 0;
        j["y"] = y ? *y : 0;
    }
    if (command == "oracle") {
        j["op"] = oracle_op;
        if (oracle_rank) j["r"] = *oracle_rank;
        if (oracle_edits) j["t"] = *oracle_edits;
        if (!matrix_path.empty()) j["in"] = matrix_path;
    }
    if (command == "equivalence" || command == "rsr") j["errors"] = planted_errors;
    return j;
}

ExperimentConfig parse_config(const std::vector<std::string>& args) {
    ExperimentConfig cfg;
    cfg.budget = Budget::from_env();

    CLI::App app{"rigidlab: exact rigidity and probabilistic-rank experiments"};
    app.require_subcommand(1);

    std::string eps_str, field_str = "F3";
    auto add_common = [&](CLI::App* sub, bool need_n) {
        auto* n_opt = sub->add_option("--n", cfg.n, "bit-length n (matrices are 2^n x 2^n)");
        if (need_n) n_opt->required();
        sub->add_option("--field", field_str, "coefficient field: Q or F<p>, e.g. F3");
        sub->add_option("--seed", cfg.seed, "64-bit experiment seed");
        sub->add_option("--trials", cfg.trials, "number of seeded trials");
        sub->add_option("--out", cfg.out, "output path (stdout when omitted)");
        sub->add_option("--format", cfg.format, "output format: json or csv");
        return sub;
    };

    auto* hadamard = add_common(app.add_subcommand("hadamard", "Walsh-Hadamard matrix facts"), true);
    (void)hadamard;

    auto* valiant =
        add_common(app.add_subcommand("valiant", "low-error non-rigidity pipeline"), true);
    valiant->add_option("--eps", eps_str, "window parameter in (0, 1/2), e.g. 0.2 or 1/5");
    valiant->add_flag("--full-window", cfg.full_window,
                      "interpolate every overlap (exact reconstruction)");

    auto* high =
        add_common(app.add_subcommand("high-error", "high-error non-rigidity pipeline"), true);
    std::uint64_t rank_target_val = 0;
    auto* rt1 = high->add_option("--rank-target", rank_target_val, "target parameter r, eps = 1/r");

    auto* symand = add_common(app.add_subcommand("sym-and", "symmetric-AND non-rigidity"), true);
    auto* rt2 = symand->add_option("--rank-target", rank_target_val, "target parameter r");
    symand->add_option("--sym", cfg.sym, "target: parity, majority, constant0, constant1");

    auto* prob = add_common(app.add_subcommand("prob-rank", "probabilistic-rank samplers"), false);
    prob->add_option("--eps", eps_str, "error budget in (0, 1)");
    prob->add_option("--sampler", cfg.sampler, "eq, leq, or leq-strict");
    prob->add_option("--circuit", cfg.circuit_path, "depth-two LTF circuit JSON file");
    prob->add_option("--mode", cfg.mode, "exhaustive or monte-carlo");
    prob->add_option("--delta", cfg.delta, "Hoeffding confidence parameter");
    prob->add_flag("--histogram", cfg.histogram, "include the per-entry error histogram");

    auto* equiv = add_common(
        app.add_subcommand("equivalence", "shift sampler from a planted Hadamard approximation"),
        true);
    equiv->add_option("--errors", cfg.planted_errors, "planted corrupted entries");

    auto* rsr = add_common(
        app.add_subcommand("rsr", "4-query self-reduction sampler for the inner product"), true);
    rsr->add_option("--errors", cfg.planted_errors, "planted corrupted entries");

    auto* protocol =
        add_common(app.add_subcommand("protocol", "one-round communication simulation"), true);
    protocol->add_option("--eps", eps_str, "error budget of the equality sampler");
    std::uint64_t px = 0, py = 0;
    auto* px_opt = protocol->add_option("--x", px, "Alice's input index");
    auto* py_opt = protocol->add_option("--y", py, "Bob's input index");

    auto* oracle = add_common(app.add_subcommand("oracle", "brute-force ground truth"), false);
    oracle->add_option("--op", cfg.oracle_op, "rigidity, min-rank, or cross-validate");
    std::uint64_t oracle_r = 0, oracle_t = 0;
    auto* r_opt = oracle->add_option("--r", oracle_r, "rank bound for the rigidity oracle");
    auto* t_opt = oracle->add_option("--t", oracle_t, "edit budget for min-rank");
    oracle->add_option("--in", cfg.matrix_path, "CSV matrix input (defaults to H_n)");

    std::vector<const char*> argv;
    argv.push_back("rigidlab");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw InvalidArgument(std::string("usage error: ") + e.what());
    }

    cfg.command = app.get_subcommands().front()->get_name();
    cfg.field = FieldSpec::parse(field_str);
    if (!eps_str.empty()) cfg.eps = parse_rational(eps_str);
    if (rt1->count() || rt2->count()) cfg.rank_target = rank_target_val;
    if (px_opt->count()) cfg.x = px;
    if (py_opt->count()) cfg.y = py;
    if (r_opt->count()) cfg.oracle_rank = oracle_r;
    if (t_opt->count()) cfg.oracle_edits = oracle_t;

    if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "jsonl")
        throw InvalidArgument("unknown --format '" + cfg.format + "' (json, csv, jsonl)");
    if (cfg.command == "valiant") {
        if (cfg.full_window == bool(cfg.eps))
            throw InvalidArgument("valiant needs exactly one of --eps or --full-window");
        if (cfg.eps && !(*cfg.eps > 0 && *cfg.eps < mpq_class(1, 2)))
            throw InvalidArgument("eps must lie in (0, 1/2), got " + cfg.eps->get_str());
    }
    if (cfg.command == "prob-rank") {
        if (cfg.circuit_path.empty() && cfg.sampler != "eq" && cfg.sampler != "leq" &&
            cfg.sampler != "leq-strict")
            throw InvalidArgument("unknown sampler '" + cfg.sampler + "'");
        if (cfg.mode != "exhaustive" && cfg.mode != "monte-carlo")
            throw InvalidArgument("unknown mode '" + cfg.mode + "'");
        if (cfg.circuit_path.empty() && cfg.n <= 0)
            throw InvalidArgument("prob-rank requires --n with a named sampler");
    }
    if (cfg.command == "protocol" && (!cfg.x || !cfg.y))
        throw InvalidArgument("protocol requires --x and --y");
    if (cfg.command == "oracle") {
        if (cfg.oracle_op == "rigidity" && !cfg.oracle_rank)
            throw InvalidArgument("oracle --op rigidity requires --r");
        if (cfg.oracle_op == "min-rank" && !cfg.oracle_edits)
            throw InvalidArgument("oracle --op min-rank requires --t");
        if (cfg.oracle_op != "rigidity" && cfg.oracle_op != "min-rank" &&
            cfg.oracle_op != "cross-validate")
            throw InvalidArgument("unknown oracle op '" + cfg.oracle_op + "'");
        if (cfg.matrix_path.empty() && cfg.n <= 0)
            throw InvalidArgument("oracle requires --n or --in");
    }
    return cfg;
}

namespace {

ordered_json error_report_payload(const ProbMatrixSampler& s, const ErrorReport& rep,
                                  bool histogram) {
    ordered_json j;
    j["claimed_rank"] = s.claimed_rank;
    j["claimed_error"] = s.claimed_error.get_str();
    j["sign_mode"] = s.sign_mode;
    j["estimate"] = rep.to_json(histogram);
    return j;
}

std::string histogram_csv(const ErrorReport& rep) {
    std::string out = "row,col,errors,trials\n";
    for (std::size_t r = 0; r < rep.rows; ++r)
        for (std::size_t c = 0; c < rep.cols; ++c) {
            const std::size_t i = r * rep.cols + c;
            if (rep.per_entry_trials[i] == 0) continue;
            out += std::to_string(r) + ',' + std::to_string(c) + ',' +
                   std::to_string(rep.per_entry_errors[i]) + ',' +
                   std::to_string(rep.per_entry_trials[i]) + '\n';
        }
    return out;
}

FactoredMatrix planted_approx(const DenseMatrix& target, std::uint64_t errors,
                              std::uint64_t seed, const FieldSpec& field) {
    FactoredMatrix f = exact_factors(target);
    Rng rng(derive_seed(seed, "plant", 0));
    std::vector<std::pair<std::size_t, std::size_t>> used;
    for (std::uint64_t i = 0; i < errors; ++i) {
        std::size_t r, c;
        do {
            r = rng.below(target.rows());
            c = rng.below(target.cols());
        } while (std::find(used.begin(), used.end(), std::make_pair(r, c)) != used.end());
        used.emplace_back(r, c);
        // Flip to a guaranteed different value: v -> 1 - v covers both the
        // 0/1 truth tables and the +-1 Hadamard entries.
        const Scalar cur = target.at(r, c);
        f = with_entry_set(f, r, c, field.sub(field.one(), cur));
    }
    return f;
}

ExperimentReport run_impl(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.config = cfg.echo();
    rep.version = kVersion;
    ordered_json& payload = rep.payload;

    if (cfg.command == "hadamard") {
        const HadamardSpec spec{cfg.n, cfg.field};
        const std::size_t dim = std::size_t{1} << cfg.n;
        payload["n"] = cfg.n;
        payload["field"] = cfg.field.name();
        payload["rows"] = dim;
        payload["cols"] = dim;
        if (cfg.budget.fits(static_cast<std::uint64_t>(dim) * dim) && cfg.n <= 10) {
            DenseMatrix h = materialize_hadamard(spec, cfg.budget);
            payload["rank"] = rank(h);
            rep.csv = h.to_csv();
        }
        return rep;
    }

    if (cfg.command == "valiant") {
        const NonRigidityParams params =
            cfg.full_window ? NonRigidityParams::full_window(cfg.n, cfg.field)
                            : NonRigidityParams::defaults(cfg.n, *cfg.eps, cfg.field);
        ValiantResult res = valiant_nonrigidity(params, cfg.budget);
        payload = res.report.to_json();
        rep.csv = res.report.row_diffs_csv();
        return rep;
    }

    if (cfg.command == "high-error") {
        const std::uint64_t r_target = require_rank_target(cfg);
        const std::uint64_t trials = cfg.trials ? cfg.trials : 1;
        payload["n"] = cfg.n;
        payload["r_target"] = r_target;
        payload["trials"] = trials;
        ordered_json per_seed = ordered_json::array();
        std::string csv = "trial,seed,monomials,diffs\n";
        mpz_class diff_sum = 0;
        bool all_measured = true;
        for (std::uint64_t i = 0; i < trials; ++i) {
            const std::uint64_t s = derive_seed(cfg.seed, "trial", i);
            ValiantResult res = high_error_nonrigidity(cfg.n, r_target, s, cfg.field, cfg.budget);
            if (i == 0) {
                payload["half_width_t"] = *res.report.half_width_t;
                payload["monomial_bound"] = res.report.monomial_bound->get_str();
            }
            ordered_json row;
            row["trial"] = i;
            row["seed"] = s;
            row["monomials"] = res.report.monomial_count;
            csv += std::to_string(i) + ',' + std::to_string(s) + ',' +
                   std::to_string(res.report.monomial_count) + ',';
            if (res.report.total_diffs) {
                row["diffs"] = *res.report.total_diffs;
                diff_sum += static_cast<unsigned long>(*res.report.total_diffs);
                csv += std::to_string(*res.report.total_diffs);
            } else {
                all_measured = false;
            }
            csv += '\n';
            per_seed.push_back(std::move(row));
        }
        payload["per_seed"] = std::move(per_seed);
        if (all_measured) {
            mpq_class mean(diff_sum, trials);
            mean.canonicalize();
            payload["mean_diffs"] = mean.get_str();
        }
        rep.csv = std::move(csv);
        return rep;
    }

    if (cfg.command == "sym-and") {
        const std::uint64_t r_target = require_rank_target(cfg);
        SymmetricFunctionSpec spec{cfg.n, cfg.field, {}};
        if (cfg.sym == "parity")
            spec = SymmetricFunctionSpec::parity(cfg.n, cfg.field);
        else if (cfg.sym == "majority")
            spec = SymmetricFunctionSpec::majority(cfg.n, cfg.field);
        else if (cfg.sym == "constant0")
            spec = SymmetricFunctionSpec::constant(cfg.n, cfg.field, cfg.field.zero());
        else if (cfg.sym == "constant1")
            spec = SymmetricFunctionSpec::constant(cfg.n, cfg.field, cfg.field.one());
        else
            throw InvalidArgument("unknown symmetric target '" + cfg.sym + "'");
        ValiantResult res = sym_and_nonrigidity(spec, r_target, cfg.seed, cfg.budget);
        payload = res.report.to_json();
        payload["sym"] = cfg.sym;
        rep.csv = res.report.row_diffs_csv();
        return rep;
    }

    if (cfg.command == "prob-rank") {
        ProbMatrixSampler sampler;
        if (!cfg.circuit_path.empty()) {
            std::ifstream in(cfg.circuit_path);
            if (!in) throw InvalidArgument("cannot open circuit file " + cfg.circuit_path);
            ordered_json cj = ordered_json::parse(in);
            sampler = ltf_ltf_sign_sampler(DepthTwoLTFCircuit::from_json(cj), require_eps(cfg),
                                           cfg.budget);
        } else if (cfg.sampler == "eq") {
            sampler = eq_sampler(cfg.n, require_eps(cfg), cfg.field);
        } else {
            sampler = leq_sampler(cfg.n, require_eps(cfg), cfg.field, cfg.sampler == "leq-strict");
        }
        const std::uint64_t trials = cfg.trials ? cfg.trials : 400;
        const auto mode = cfg.mode == "exhaustive" ? ErrorEstimateMode::Exhaustive
                                                   : ErrorEstimateMode::MonteCarlo;
        ErrorReport er = estimate_error(sampler, mode, trials, cfg.seed, cfg.delta, cfg.budget);
        payload = error_report_payload(sampler, er, cfg.histogram);
        rep.csv = histogram_csv(er);
        return rep;
    }

    if (cfg.command == "equivalence") {
        const HadamardSpec spec{cfg.n, cfg.field};
        DenseMatrix h = materialize_hadamard(spec, cfg.budget);
        FactoredMatrix planted = planted_approx(h, cfg.planted_errors, cfg.seed, cfg.field);
        ProbMatrixSampler sampler = rigidity_to_prob_rank(planted, {}, cfg.budget);
        const std::uint64_t trials = cfg.trials ? cfg.trials : 256;
        ErrorReport er = estimate_error(sampler, ErrorEstimateMode::Exhaustive, trials, cfg.seed,
                                        cfg.delta, cfg.budget);
        payload["n"] = cfg.n;
        payload["planted_errors"] = cfg.planted_errors;
        payload.update(error_report_payload(sampler, er, cfg.histogram));
        if (cfg.n <= 4) {
            auto [lo, hi] = exact_shift_error_range(planted, cfg.budget);
            payload["exact_shift_error_min"] = lo.get_str();
            payload["exact_shift_error_max"] = hi.get_str();
        }
        rep.csv = histogram_csv(er);
        return rep;
    }

    if (cfg.command == "rsr") {
        DenseMatrix mf(std::size_t{1} << cfg.n, std::size_t{1} << cfg.n, cfg.field);
        RSRSpec rsr = ip2_rsr(cfg.n, cfg.field);
        for (std::size_t x = 0; x < mf.rows(); ++x)
            for (std::size_t y = 0; y < mf.cols(); ++y) mf.set(x, y, rsr.f(x, y));
        FactoredMatrix planted = planted_approx(mf, cfg.planted_errors, cfg.seed, cfg.field);
        ProbMatrixSampler sampler = rsr_prob_rank(rsr, planted, {}, cfg.budget);
        const std::uint64_t trials = cfg.trials ? cfg.trials : 400;
        ErrorReport er = estimate_error(sampler, ErrorEstimateMode::Exhaustive, trials, cfg.seed,
                                        cfg.delta, cfg.budget);
        payload["n"] = cfg.n;
        payload["k"] = rsr.k;
        payload["planted_errors"] = cfg.planted_errors;
        payload.update(error_report_payload(sampler, er, cfg.histogram));
        rep.csv = histogram_csv(er);
        return rep;
    }

    if (cfg.command == "protocol") {
        ProbMatrixSampler sampler = eq_sampler(cfg.n, require_eps(cfg), cfg.field);
        const std::uint64_t draws = cfg.trials ? cfg.trials : 8;
        payload["n"] = cfg.n;
        payload["claimed_rank"] = sampler.claimed_rank;
        ordered_json trace = ordered_json::array();
        std::string lines;
        for (std::uint64_t d = 0; d < draws; ++d) {
            const std::uint64_t s = derive_seed(cfg.seed, "draw", d);
            auto [answer, bits] = simulate_protocol(sampler, *cfg.x, *cfg.y, s);
            ordered_json line;
            line["x"] = *cfg.x;
            line["y"] = *cfg.y;
            line["seed"] = s;
            line["answer"] = answer.str();
            line["bits"] = bits;
            lines += line.dump() + '\n';
            trace.push_back(std::move(line));
        }
        payload["draws"] = std::move(trace);
        rep.csv = std::move(lines);  // JSON-lines rendering
        return rep;
    }

    if (cfg.command == "oracle") {
        DenseMatrix m = [&] {
            if (!cfg.matrix_path.empty()) {
                std::ifstream in(cfg.matrix_path);
                if (!in) throw InvalidArgument("cannot open matrix file " + cfg.matrix_path);
                std::string text((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
                return DenseMatrix::from_csv(text, cfg.field);
            }
            return materialize_hadamard(HadamardSpec{cfg.n, cfg.field}, cfg.budget);
        }();
        payload["op"] = cfg.oracle_op;
        payload["rows"] = m.rows();
        payload["cols"] = m.cols();
        payload["field"] = cfg.field.name();
        if (cfg.oracle_op == "rigidity") {
            payload["r"] = *cfg.oracle_rank;
            payload["value"] = brute_force_rigidity(m, *cfg.oracle_rank);
        } else if (cfg.oracle_op == "min-rank") {
            payload["t"] = *cfg.oracle_edits;
            payload["value"] = min_rank_within(m, *cfg.oracle_edits);
        } else {
            ConsistencyReport cr = cross_validate(m);
            payload["ok"] = cr.ok;
            payload["violations"] = cr.violations;
        }
        return rep;
    }

    throw InvalidArgument("unknown command '" + cfg.command + "'");
}

}  // namespace

ExperimentReport run(const ExperimentConfig& cfg) {
    return run_impl(cfg);
}

std::string report_json_text(const ExperimentReport& report) {
    ordered_json j;
    j["config"] = report.config;
    j["version"] = report.version;
    j["payload"] = report.payload;
    return j.dump(2) + "\n";
}

void emit_report(const ExperimentReport& report, const std::string& path,
                 const std::string& format) {
    std::string text;
    if (format == "json") {
        text = report_json_text(report);
    } else {
        if (report.csv.empty())
            throw InvalidArgument("this command has no " + format + " rendering");
        text = report.csv;
    }
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp + " for writing");
        out << text;
        if (!out) throw Error("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error("cannot rename " + tmp + " to " + path);
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const auto t0 = std::chrono::steady_clock::now();
        ExperimentConfig cfg = parse_config(args);
        ExperimentReport report = run(cfg);
        emit_report(report, cfg.out, cfg.format);
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        // Timing stays out of the report so identical configs emit identical bytes.
        std::cerr << "rigidlab: " << cfg.command << " finished in " << ms << " ms\n";
        return 0;
    } catch (const HelpRequested& h) {
        std::cout << h.text;
        return 0;
    } catch (const InvalidArgument& e) {
        std::cerr << "rigidlab: " << e.what() << "\n";
        return 2;
    } catch (const BudgetExceeded& e) {
        std::cerr << "rigidlab: " << e.what() << "\n";
        return 3;
    } catch (const InternalInvariant& e) {
        std::cerr << "rigidlab: internal invariant violated: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "rigidlab: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace rigidlab
