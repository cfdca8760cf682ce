#pragma once

// Batch front-end: run configuration, tabular output and the commands.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace qtrap::cli {

inline constexpr const char* kVersion = "1.0.0";

/// Invalid configuration (exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string command;

    // problem selection
    bool well = false;
    bool calogero = false;
    bool halpha = false;
    bool multitrap = false;
    bool free = false;
    bool fd = false;
    bool all = false;

    // parameters
    double gamma = 2.0;
    double alpha = 0.0;
    double q = 1.0;
    double length = 12.0;
    double tmax = 1.0;
    double dt = 1e-3;
    double pmax = 40.0;
    double height = 10.0;
    double x0 = 1.5707963267948966;
    double sigma = 0.3;
    double p0 = 5.0;
    long nmax = 5;
    long k = 6;
    long cell = 0;
    long state = -1;
    std::string n_range = "-2..2";
    std::string method = "spectral";
    std::string potential = "zero";
    std::size_t points = 0;  // 0 selects the command default
    std::size_t samples = 11;
    std::size_t count = 8001;
    std::size_t alphas = 33;

    // run control
    std::string format = "csv";
    std::string output;
    std::uint64_t seed = 0;
    bool timing = false;

    /// Echo of the effective configuration (for JSON metadata).
    nlohmann::ordered_json to_json() const;
};

/// Overrides fields from a JSON object whose keys are flag names without the
/// leading dashes. Unknown keys or mistyped values throw ConfigError.
void apply_json_config(RunConfig& config, const nlohmann::json& overrides);

/// Validates the configuration for its command; throws ConfigError.
void validate(const RunConfig& config);

using Cell = std::variant<long, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    /// Extra scalar results reported in JSON output.
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
    /// Non-zero when the command ran but its checks failed (verify).
    int status = 0;
};

/// 17 significant digits, C locale.
std::string format_double(double v);

void write_csv(std::ostream& out, const Table& table);
void write_json(std::ostream& out, const Table& table, const RunConfig& config, const double* wall_seconds);

Table cmd_spectrum(const RunConfig& config);
Table cmd_evolve(const RunConfig& config);
Table cmd_leakage(const RunConfig& config);
Table cmd_momentum(const RunConfig& config);
Table cmd_bands(const RunConfig& config);
Table cmd_verify(const RunConfig& config);

/// Full command-line entry point: 0 success, 2 invalid configuration,
/// 3 numerical failure (verify returns 1 when an invariant fails).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qtrap::cli
