#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stylo {

struct TaskCase {
  std::string case_id;
  std::string input;
  std::string expected;
  std::string scale = "small";  // small | large
};

enum class Outcome : std::uint8_t {
  CompileError,
  RuntimeError,
  WrongAnswer,
  TimeLimit,
  Accepted,
};

const char* outcome_name(Outcome o);

struct Verdict {
  std::string case_id;
  Outcome outcome = Outcome::RuntimeError;
  std::optional<double> wall_ms;                  // present iff the program started
  std::optional<std::uint64_t> peak_memory_bytes; // absent when unreported
  std::string detail;
};

struct ToolchainEntry {
  std::string compile_cmd;  // placeholders: {source} {artifact}
  std::string run_cmd;      // placeholder: {artifact}
  int time_limit_ms = 2000;
  std::uint64_t memory_limit_bytes = 0;  // 0 = unlimited
  int compile_time_limit_ms = 60000;
};

struct ToolchainConfig {
  std::map<std::string, ToolchainEntry> languages;
};

ToolchainConfig load_toolchain(const std::string& path);

// The configured command's binary does not exist; distinct from a compile
// failure of the source under test.
struct ToolchainMissing : std::runtime_error {
  explicit ToolchainMissing(const std::string& cmd)
      : std::runtime_error("toolchain command not found: " + cmd) {}
};

struct UnconfiguredLanguage : std::runtime_error {
  explicit UnconfiguredLanguage(const std::string& lang)
      : std::runtime_error("no toolchain configured for language: " + lang) {}
};

struct CompileResult {
  bool ok = false;
  std::string artifact;
  std::string log;
};

// Compiles via the external toolchain; exit 0 yields the artifact path.
CompileResult check_runnable(const std::string& source_path,
                             const ToolchainEntry& toolchain,
                             const std::string& work_dir);

// Runs the artifact on every case. A case failure never aborts the batch;
// output comparison ignores trailing whitespace per line and trailing
// newlines.
std::vector<Verdict> judge(const std::string& artifact,
                           const std::vector<TaskCase>& cases,
                           const ToolchainEntry& toolchain, std::size_t pool = 1);

// Reads `<task_dir>/input_<k>.txt` + `expected_<k>.txt` pairs, ordered by k.
std::vector<TaskCase> load_cases(const std::string& task_dir);

bool outputs_match(const std::string& actual, const std::string& expected);

std::string render_verdicts_csv(const std::vector<Verdict>& verdicts,
                                bool include_timing = true);

}  // namespace stylo
