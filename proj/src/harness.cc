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

#include "mutafuzz/harness.h"

#include <fcntl.h>
#include <signal.h>
#include <string.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <time.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mutafuzz/error.h"

extern char** environ;

namespace mutafuzz {

namespace {

std::vector<std::string> SplitCommand(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

size_t CountPlaceholders(std::string_view text) {
  size_t n = 0;
  for (size_t at = text.find("@@"); at != std::string_view::npos;
       at = text.find("@@", at + 2)) {
    ++n;
  }
  return n;
}

}  // namespace

TargetSpec TargetSpec::Parse(std::string_view text) {
  TargetSpec spec;
  if (text.rfind("builtin:", 0) == 0) {
    spec.kind = Kind::kBuiltin;
    spec.name = std::string(text.substr(8));
    if (FindBuiltinTarget(spec.name) == nullptr) {
      std::string known;
      for (const auto& t : ListBuiltinTargets()) {
        if (!known.empty()) known += ", ";
        known += t.name;
      }
      throw InvalidConfig("unknown builtin target '" + spec.name +
                          "' (known: " + known + ")");
    }
    return spec;
  }
  if (text.rfind("ext:", 0) == 0) {
    spec.kind = Kind::kExternal;
    spec.name = std::string(text.substr(4));
    if (SplitCommand(spec.name).empty()) {
      throw InvalidConfig("empty external command");
    }
    if (CountPlaceholders(spec.name) != 1) {
      throw InvalidConfig(
          "external command must contain exactly one @@ placeholder: '" +
          spec.name + "'");
    }
    return spec;
  }
  throw InvalidConfig("target must start with 'builtin:' or 'ext:': '" +
                      std::string(text) + "'");
}

std::string TargetSpec::Describe() const {
  return (kind == Kind::kBuiltin ? "builtin:" : "ext:") + name;
}

Executor::Executor(TargetSpec spec, std::filesystem::path scratch_dir)
    : spec_(std::move(spec)), scratch_dir_(std::move(scratch_dir)) {
  if (spec_.kind == TargetSpec::Kind::kBuiltin) {
    builtin_ = FindBuiltinTarget(spec_.name);
    if (builtin_ == nullptr) {
      throw InvalidConfig("unknown builtin target '" + spec_.name + "'");
    }
    return;
  }
  argv_template_ = SplitCommand(spec_.name);
  if (argv_template_.empty()) throw InvalidConfig("empty external command");
  if (CountPlaceholders(spec_.name) != 1) {
    throw InvalidConfig("external command must contain exactly one @@");
  }
  if (scratch_dir_.empty()) {
    scratch_dir_ = std::filesystem::temp_directory_path() /
                   ("mutafuzz-" + std::to_string(getpid()));
    owns_scratch_dir_ = true;
  }
  std::filesystem::create_directories(scratch_dir_);
}

Executor::~Executor() {
  if (owns_scratch_dir_) {
    std::error_code ec;
    std::filesystem::remove_all(scratch_dir_, ec);
  }
}

size_t Executor::edge_count() const {
  if (builtin_ == nullptr) {
    throw NotInstrumented("external target '" + spec_.name +
                          "' has no known edge universe");
  }
  return builtin_->edge_count;
}

RunOutcome Executor::Execute(std::span<const uint8_t> input) {
  return builtin_ != nullptr ? ExecuteBuiltin(input) : ExecuteExternal(input);
}

RunOutcome Executor::ExecuteBuiltin(std::span<const uint8_t> input) {
  RunOutcome outcome;
  const auto start = std::chrono::steady_clock::now();
  const int site = builtin_->run(input, outcome.coverage);
  outcome.duration = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - start);
  if (site > 0) {
    outcome.status = RunOutcome::Status::kCrash;
    outcome.signal_or_code = site;
  }
  return outcome;
}

RunOutcome Executor::ExecuteExternal(std::span<const uint8_t> input) {
  const uint64_t run_id = run_counter_.fetch_add(1);
  const std::string tag =
      std::to_string(getpid()) + "-" + std::to_string(run_id);
  const std::filesystem::path input_path = scratch_dir_ / ("input-" + tag);
  const std::filesystem::path cov_path = scratch_dir_ / ("cov-" + tag);
  {
    std::ofstream f(input_path, std::ios::binary);
    f.write(reinterpret_cast<const char*>(input.data()),
            static_cast<std::streamsize>(input.size()));
    if (!f) throw Error("cannot write input file " + input_path.string());
  }

  // Build argv/envp before forking; the child only makes raw syscalls.
  std::vector<std::string> argv_store = argv_template_;
  for (std::string& arg : argv_store) {
    if (size_t at = arg.find("@@"); at != std::string::npos) {
      arg.replace(at, 2, input_path.string());
    }
  }
  std::vector<char*> argv;
  argv.reserve(argv_store.size() + 1);
  for (std::string& arg : argv_store) argv.push_back(arg.data());
  argv.push_back(nullptr);

  std::vector<std::string> env_store;
  for (char** e = environ; *e != nullptr; ++e) {
    if (strncmp(*e, "MUTAFUZZ_COV_FILE=", 18) == 0) continue;
    env_store.emplace_back(*e);
  }
  env_store.push_back("MUTAFUZZ_COV_FILE=" + cov_path.string());
  std::vector<char*> envp;
  envp.reserve(env_store.size() + 1);
  for (std::string& e : env_store) envp.push_back(e.data());
  envp.push_back(nullptr);

  int exec_pipe[2];
  if (pipe2(exec_pipe, O_CLOEXEC) != 0) throw Error("pipe2 failed");

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = fork();
  if (pid < 0) {
    close(exec_pipe[0]);
    close(exec_pipe[1]);
    throw TargetSpawnFailure("fork failed");
  }
  if (pid == 0) {
    // Child: silence the target, drop core files, cap memory, exec.
    const int devnull = open("/dev/null", O_RDWR);
    if (devnull >= 0) {
      dup2(devnull, 0);
      dup2(devnull, 1);
      dup2(devnull, 2);
    }
    struct rlimit no_core = {0, 0};
    setrlimit(RLIMIT_CORE, &no_core);
    if (spec_.memory_cap_bytes.has_value()) {
      struct rlimit mem = {*spec_.memory_cap_bytes, *spec_.memory_cap_bytes};
      setrlimit(RLIMIT_AS, &mem);
    }
    execvpe(argv[0], argv.data(), envp.data());
    const int err = errno;
    ssize_t ignored = write(exec_pipe[1], &err, sizeof(err));
    (void)ignored;
    _exit(127);
  }

  close(exec_pipe[1]);
  int exec_errno = 0;
  const ssize_t n = read(exec_pipe[0], &exec_errno, sizeof(exec_errno));
  close(exec_pipe[0]);
  if (n > 0) {
    int status = 0;
    waitpid(pid, &status, 0);
    std::filesystem::remove(input_path);
    throw TargetSpawnFailure("cannot exec '" + argv_store[0] +
                             "': " + strerror(exec_errno));
  }

  // Poll for exit with an escalating sleep; SIGKILL on deadline.
  const auto deadline = start + spec_.timeout;
  int status = 0;
  bool timed_out = false;
  long sleep_ns = 100'000;  // 0.1 ms
  for (;;) {
    const pid_t done = waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (std::chrono::steady_clock::now() >= deadline) {
      timed_out = true;
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      break;
    }
    struct timespec ts = {0, sleep_ns};
    nanosleep(&ts, nullptr);
    if (sleep_ns < 2'000'000) sleep_ns *= 2;
  }

  RunOutcome outcome;
  outcome.duration = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - start);
  if (timed_out && WIFSIGNALED(status) && WTERMSIG(status) == SIGKILL) {
    outcome.status = RunOutcome::Status::kTimeout;
    outcome.signal_or_code = SIGKILL;
  } else if (WIFSIGNALED(status)) {
    outcome.status = RunOutcome::Status::kCrash;
    outcome.signal_or_code = WTERMSIG(status);
  } else {
    outcome.status = RunOutcome::Status::kOk;
    outcome.signal_or_code = WIFEXITED(status) ? WEXITSTATUS(status) : 0;
  }

  // Pick up coverage if the target honored MUTAFUZZ_COV_FILE.
  std::error_code ec;
  const auto cov_size = std::filesystem::file_size(cov_path, ec);
  if (!ec && cov_size == outcome.coverage.size()) {
    std::ifstream f(cov_path, std::ios::binary);
    std::vector<char> raw(outcome.coverage.size());
    if (f.read(raw.data(), static_cast<std::streamsize>(raw.size()))) {
      for (size_t i = 0; i < raw.size(); ++i) {
        outcome.coverage.Set(i, static_cast<uint8_t>(raw[i]));
      }
    }
  }
  std::filesystem::remove(input_path, ec);
  std::filesystem::remove(cov_path, ec);
  return outcome;
}

}  // namespace mutafuzz
