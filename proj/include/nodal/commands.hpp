#pragma once
// Batch experiment runner: JSON-configured pipelines over solve, count, qer,
// growth, weight and decay, writing deterministic CSV/JSON artifacts stamped
// with the library version and the config hash.

#include <string>
#include <vector>

namespace nodal::commands {

// Library version stamped into every artifact.
const char* version();

// FNV-1a 64-bit hash of the canonical (re-serialized) config document.
std::string config_hash(const std::string& config_json);

struct CommandResult {
  int exit_code = 0;  // 0 ok, 2 config error, 3 numerical, 4 assertion
  std::string message;
  std::vector<std::string> outputs;  // files written (relative to out_dir)
};

// Dispatch one subcommand (solve | count | qer | growth | weight | decay) on
// a JSON config document.  Never throws: errors are reported through
// exit_code/message so the process exit status mirrors the result.
CommandResult run_command(const std::string& cmd, const std::string& config_json,
                          const std::string& out_dir, bool long_running);

}  // namespace nodal::commands
