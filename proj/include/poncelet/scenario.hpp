#pragma once

// Command-line harness: scenario parsing, dispatch, and report emission.
// Numbers written "p/q" parse as exact rationals; anything else is a float,
// and the arithmetic mode lands in every output document.

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poncelet/errors.hpp"

namespace poncelet::harness {

enum class Command {
    cayley,
    scan_periods,
    caustics,
    elliptic,
    simulate,
    compare_models,
    hierarchy_check,
    potential,
};

const char* command_name(Command c);

struct Scenario {
    Command command = Command::cayley;
    // raw numeric strings so exactness survives parsing
    std::vector<std::string> a, mu, b, start, dir, x, lambda;
    std::string c;
    int n = 0;
    int bounces = 10;
    int samples = 1000;
    std::vector<int> ks{-1, 0, 1, 2};
    double bracket_lo = 0, bracket_hi = 0;
    bool has_bracket = false;
    std::string basis;  // "V1".."Vk" or "Wk"
    int axis = 1;       // 1-based, W-kind
    double tol = 1e-9;
    double eps = 1e-6;
    std::uint64_t seed = 20240915;
    std::string output_dir;  // empty: stdout only
    std::string format = "report";
    bool exact_mode = false;  // derived during validation
};

// argv-style parsing (argv[0] excluded); merges an optional --config document
// with flags winning. Throws UnknownCommand / BadParameter.
Scenario parse_scenario(const std::vector<std::string>& args);

struct Report {
    nlohmann::json doc;
    std::string table;                          // optional delimited table
    std::map<std::string, std::string> files;   // extra artifacts (series dumps)
};

Report execute(const Scenario& s);

// Writes report.json (and table.tsv when present) under s.output_dir, or
// prints to stdout when no directory is configured. Byte-stable given the
// same scenario and seed.
void emit_report(const Report& r, const Scenario& s);

// Full entry point used by the binary: parse, execute, emit; maps errors to
// their distinct exit codes and prints a machine-readable error block.
int run_cli(int argc, char** argv);

}  // namespace poncelet::harness
