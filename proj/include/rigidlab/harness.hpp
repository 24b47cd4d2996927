#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "rigidlab/budget.hpp"
#include "rigidlab/field.hpp"

namespace rigidlab {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentConfig {
    std::string command;
    int n = 0;
    FieldSpec field = FieldSpec::parse("F3");
    std::optional<mpq_class> eps;
    std::optional<std::uint64_t> rank_target;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;  // 0 = command default
    std::string out;           // empty = stdout
    std::string format = "json";

    bool full_window = false;           // valiant
    std::string sym = "parity";         // sym-and target
    std::string sampler = "eq";         // prob-rank sampler
    std::string mode = "exhaustive";    // error estimation mode
    bool histogram = false;             // include per-entry histogram
    std::string circuit_path;           // prob-rank: depth-two circuit JSON
    std::optional<std::uint64_t> x, y;  // protocol inputs
    std::string oracle_op = "rigidity";
    std::optional<std::uint64_t> oracle_rank;
    std::optional<std::uint64_t> oracle_edits;
    std::string matrix_path;            // oracle: CSV matrix input, H_n if empty
    std::uint64_t planted_errors = 3;   // equivalence / rsr corruption count
    double delta = 1e-6;

    Budget budget = Budget{};

    ordered_json echo() const;
};

struct ExperimentReport {
    ordered_json config;
    std::string version;
    ordered_json payload;
    std::string csv;  // alternate rendering; empty when the command has none
};

// Parses argv (without the program name). Throws InvalidArgument with a
// usage message on unknown flags or invalid combinations.
ExperimentConfig parse_config(const std::vector<std::string>& args);

// Dispatches to the owning module. Deterministic given the config.
ExperimentReport run(const ExperimentConfig& config);

// Writes canonical JSON (or the command's CSV schema) atomically.
void emit_report(const ExperimentReport& report, const std::string& path,
                 const std::string& format);

std::string report_json_text(const ExperimentReport& report);

// Full CLI entry: parse, run, emit. Exit codes: 0 ok, 2 usage, 3 budget,
// 4 internal invariant.
int cli_main(int argc, char** argv);

}  // namespace rigidlab
