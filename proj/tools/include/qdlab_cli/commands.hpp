#pragma once

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdlab_cli/report.hpp"

namespace qdlab::cli {

/// Bad invocation: unknown key, missing seed, malformed value. Exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ParamKind { Int, UInt64, Double, Bool, String, IntList, DoubleList };

struct ParamSpec {
  std::string key;
  ParamKind kind;
  Json default_value;  // null means "no default"
  std::string help;
};

struct Subcommand {
  std::string name;
  std::string description;
  std::vector<ParamSpec> params;
  /// Whether this resolved configuration draws random numbers.
  std::function<bool(const Json&)> stochastic;
  std::function<Report(const Json&)> run;
};

const std::vector<Subcommand>& subcommands();
const Subcommand& find_subcommand(const std::string& name);

/// Keys accepted by every subcommand in addition to its own parameters.
const std::vector<ParamSpec>& common_params();

/// Merges defaults, the config file object and command-line overrides (in
/// that order), rejecting unknown keys and ill-typed values.
Json resolve_config(const Subcommand& cmd, const Json& file_config, const Json& overrides);

/// Converts a command-line string to the JSON value of the given kind.
Json parse_value(ParamKind kind, const std::string& raw);

/// Runs the subcommand on a resolved configuration and fills the header.
Report run_subcommand(const Subcommand& cmd, const Json& config);

/// Whole program; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdlab::cli
