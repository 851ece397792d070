#pragma once

// Command-line front end: velocity | pinning | evolve | validate.
// Exit codes: 0 success, 1 validation failure, 2 bad config.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <latticeflow/rational.hpp>

namespace latticeflow::cli
{
struct RunConfig
{
    std::string command;

    Rational alpha = 1;
    Rational gamma = 1;
    std::vector<Rational> deltas{Rational(0)};
    Rational epsilon{1, 100};

    std::optional<Rational> l1;
    std::optional<Rational> l2;
    std::optional<std::vector<std::int64_t>> rect; ///< left, right, bottom, top
    Rational horizon = 1;
    std::string tie = "smaller";
    std::string branch = "lower";
    std::string mode = "both"; ///< discrete | ode | both
    bool compare = false;
    std::vector<Rational> eps_list;
    std::size_t snapshots = 6;

    Rational y_max = 4;
    bool overlay = false;
    Rational delta_max = 1;
    std::size_t samples = 101;

    std::string suite = "default";
    std::string grid = "builtin"; ///< validate on the built-in grid or on alpha, gamma, deltas
    std::uint64_t seed = 1;
    bool inject = false;

    std::string out_dir = ".";
    std::vector<std::string> formats{"csv", "json", "svg"};
};

class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Reads flags and an optional `--config FILE` of `key = value` lines (flags win).
/// Sets dump to true when --dump-config was given.  Throws ConfigError naming
/// the offending field.
RunConfig parse_arguments(const std::vector<std::string>& args, bool* dump = nullptr);

/// Checks cross-field constraints; throws ConfigError naming the field.
void validate(const RunConfig& config);

/// Canonical `key = value` text that parses back to the same config.
std::string dump_config(const RunConfig& config);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
} // namespace latticeflow::cli
