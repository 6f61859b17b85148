#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

namespace bbs::cli {

using json = nlohmann::json;

/// One invocation of the tool: subcommand, typed parameters, seed and output
/// paths. Round-trips through JSON without loss.
struct ExperimentSpec {
  std::string command;
  json params = json::object();
  std::optional<std::uint64_t> seed;
  std::map<std::string, std::string> outputs;  // "report", "csv", ...

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

void to_json(json& j, const ExperimentSpec& s);
void from_json(const json& j, ExperimentSpec& s);

ExperimentSpec load_spec(const std::string& path);
void save_spec(const ExperimentSpec& spec, const std::string& path);

enum ExitCode : int { kOk = 0, kUsage = 1, kStatFailure = 2 };

struct RunResult {
  int exit_code = kOk;
  json report;  // {spec, results, diagnostics, version}
};

/// Seed used by a spec: explicit seed, else $BBS_SEED, else 1.
std::uint64_t resolve_seed(const ExperimentSpec& spec);

/// Runs the experiment, writing human-readable output to `out` (or the JSON
/// report when params.json is true) and the artifacts named in `outputs`.
/// Library errors are reported on `err` with exit code 1.
RunResult run(const ExperimentSpec& spec, std::ostream& out, std::ostream& err);

std::string version();

}  // namespace bbs::cli
