#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace opideal::cli {

inline constexpr std::uint64_t kDefaultSeed = 20070601;

/// Default seed, overridden by the OPIDEAL_SEED environment variable.
std::uint64_t default_seed();

struct RunConfig {
    std::string subcommand; // "norm", "experiment truncation-growth", ...

    std::string phi = "schatten:2";
    std::string matrix;
    std::string flag;
    std::string x0;
    std::string z;
    std::string mu;
    std::string nu;
    std::string sequence;
    std::string structure;
    std::string group = "s3";
    std::string group_file;
    std::string type = "A";
    std::optional<std::pair<int, int>> split;
    std::vector<int> cuts;
    std::vector<int> sizes{4, 8, 16, 32, 64};

    int m_max = 16;
    int seq_len = 64;
    int trials = 200;
    int restarts = 16;
    int jobs = 1;
    std::uint64_t seed = kDefaultSeed;
    std::optional<double> tol;

    std::string output;         // empty: stdout
    std::string format = "json"; // json | csv
};

struct RunResult {
    int status = 0;          // 0 ok, 1 module or input error, 2 unknown subcommand
    std::string report;      // machine-readable, goes to stdout (or --output)
    std::string diagnostic;  // human-readable, goes to stderr
};

/// Runs one subcommand. Never throws; errors become a JSON report of the
/// form {"error": {"code": ..., "message": ..., "quantity": ...}}.
RunResult dispatch(const RunConfig& config);

/// Full front end: parses argv, dispatches, writes the report.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

const std::vector<std::string>& subcommands();

} // namespace opideal::cli
