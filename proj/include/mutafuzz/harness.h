// Copyright 2026 The Mutafuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MUTAFUZZ_HARNESS_H_
#define MUTAFUZZ_HARNESS_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mutafuzz/coverage.h"

namespace mutafuzz {

// Describes what to execute. Either a built-in target (instrumented
// in-process byte parser) or an external command line in which exactly one
// "@@" placeholder is replaced by the path of the current input file.
struct TargetSpec {
  enum class Kind { kBuiltin, kExternal };

  Kind kind = Kind::kBuiltin;
  std::string name;  // builtin name, or the external command template
  std::chrono::milliseconds timeout{1000};
  std::optional<uint64_t> memory_cap_bytes;

  // Parses the CLI form: "builtin:NAME" or "ext:CMD ... @@ ...".
  // Throws InvalidConfig on unknown builtins, a missing/duplicated "@@",
  // or an unknown prefix.
  static TargetSpec Parse(std::string_view text);

  std::string Describe() const;
};

// Result of one target execution.
struct RunOutcome {
  enum class Status {
    kOk,       // terminated normally
    kCrash,    // abnormal termination (signal / planted crash site)
    kTimeout,  // ran past the configured deadline and was killed
  };

  Status status = Status::kOk;
  // Builtin targets: crash site id. External: the fatal signal number on
  // crash, the exit code otherwise.
  int signal_or_code = 0;
  CoverageMap coverage;  // raw per-run hit counts
  std::chrono::microseconds duration{0};
};

// One in-process fuzz target. `run` parses `input`, records edge hits into
// `coverage`, and returns a crash site id when it reaches a planted defect.
// Targets are pure functions of their input: identical bytes yield identical
// coverage and verdicts.
struct BuiltinTarget {
  std::string_view name;
  std::string_view description;
  size_t edge_count;  // size of the target's edge universe
  // Returns the crash site id (> 0) or 0 when the input parses cleanly.
  int (*run)(std::span<const uint8_t> input, CoverageMap& coverage);
};

const std::vector<BuiltinTarget>& ListBuiltinTargets();
const BuiltinTarget* FindBuiltinTarget(std::string_view name);

// Executes a target, builtin or external, one input at a time.
//
// External targets communicate coverage back (optionally) by honoring the
// MUTAFUZZ_COV_FILE environment variable: if the named file exists after the
// run and is exactly 65536 bytes, it is read as raw little-endian hit counts.
// Targets that ignore the variable simply yield empty coverage.
class Executor {
 public:
  // Validates `spec` eagerly (throws InvalidConfig). `scratch_dir` is where
  // input/coverage temp files for external targets live; empty means the
  // system temp directory.
  explicit Executor(TargetSpec spec, std::filesystem::path scratch_dir = {});
  ~Executor();

  Executor(const Executor&) = delete;
  Executor& operator=(const Executor&) = delete;

  // Runs the target on `input`. Thread-safe: concurrent calls use distinct
  // scratch files. Throws TargetSpawnFailure if an external process cannot
  // be started at all.
  RunOutcome Execute(std::span<const uint8_t> input);

  // True when the per-target edge universe is known (builtin targets).
  bool instrumented() const { return builtin_ != nullptr; }
  // Size of the edge universe. Throws NotInstrumented for external targets.
  size_t edge_count() const;

  const TargetSpec& spec() const { return spec_; }

 private:
  RunOutcome ExecuteBuiltin(std::span<const uint8_t> input);
  RunOutcome ExecuteExternal(std::span<const uint8_t> input);

  TargetSpec spec_;
  const BuiltinTarget* builtin_ = nullptr;
  std::vector<std::string> argv_template_;
  std::filesystem::path scratch_dir_;
  bool owns_scratch_dir_ = false;
  std::atomic<uint64_t> run_counter_{0};
};

}  // namespace mutafuzz

#endif  // MUTAFUZZ_HARNESS_H_
