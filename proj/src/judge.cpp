#include "stylo/judge.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "stylo/text.hpp"

namespace stylo {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_command(const std::string& cmd) {
  std::vector<std::string> argv;
  std::string cur;
  for (char c : cmd) {
    if (c == ' ' || c == '\t') {
      if (!cur.empty()) {
        argv.push_back(cur);
        cur.clear();
      }
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) argv.push_back(cur);
  return argv;
}

std::string substitute(std::string s, const std::string& key, const std::string& value) {
  std::string token = "{" + key + "}";
  std::size_t at;
  while ((at = s.find(token)) != std::string::npos) {
    s.replace(at, token.size(), value);
  }
  return s;
}

struct RunResult {
  bool exec_failed = false;   // command itself missing
  int exec_errno = 0;
  bool timed_out = false;
  int exit_code = -1;
  int term_signal = 0;
  double wall_ms = 0.0;
  std::uint64_t max_rss_bytes = 0;
};

// fork/exec with redirected stdio; wall-clock watchdog kills the process
// group. The CLOEXEC pipe reports an exec failure errno to the parent.
RunResult run_process(const std::vector<std::string>& argv,
                      const std::string& stdin_path, const std::string& stdout_path,
                      const std::string& stderr_path, int time_limit_ms,
                      std::uint64_t memory_limit_bytes) {
  RunResult result;
  int errpipe[2];
  if (pipe(errpipe) != 0) throw std::runtime_error("pipe failed");
  fcntl(errpipe[1], F_SETFD, FD_CLOEXEC);

  std::vector<char*> cargv;
  cargv.reserve(argv.size() + 1);
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  auto start = std::chrono::steady_clock::now();
  pid_t pid = fork();
  if (pid < 0) {
    close(errpipe[0]);
    close(errpipe[1]);
    throw std::runtime_error("fork failed");
  }
  if (pid == 0) {
    close(errpipe[0]);
    setpgid(0, 0);
    int in = stdin_path.empty() ? open("/dev/null", O_RDONLY)
                                : open(stdin_path.c_str(), O_RDONLY);
    int out = open(stdout_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    int err = open(stderr_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (in >= 0) dup2(in, 0);
    if (out >= 0) dup2(out, 1);
    if (err >= 0) dup2(err, 2);
    if (memory_limit_bytes > 0) {
      rlimit lim{memory_limit_bytes, memory_limit_bytes};
      setrlimit(RLIMIT_AS, &lim);
    }
    execvp(cargv[0], cargv.data());
    int saved = errno;
    ssize_t n = write(errpipe[1], &saved, sizeof(saved));
    (void)n;
    _exit(127);
  }

  close(errpipe[1]);
  int status = 0;
  rusage usage{};
  bool exited = false;
  for (;;) {
    pid_t w = wait4(pid, &status, WNOHANG, &usage);
    if (w == pid) {
      exited = true;
      break;
    }
    auto elapsed = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    if (time_limit_ms > 0 && elapsed > time_limit_ms) {
      result.timed_out = true;
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);
      wait4(pid, &status, 0, &usage);
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  (void)exited;
  result.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();

  int child_errno = 0;
  ssize_t n = read(errpipe[0], &child_errno, sizeof(child_errno));
  close(errpipe[0]);
  if (n == sizeof(child_errno)) {
    result.exec_failed = true;
    result.exec_errno = child_errno;
    return result;
  }

  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.term_signal = WTERMSIG(status);
  }
  result.max_rss_bytes = static_cast<std::uint64_t>(usage.ru_maxrss) * 1024;
  return result;
}

std::string unique_temp(const std::string& dir, const std::string& tag) {
  static std::atomic<std::uint64_t> counter{0};
  return dir + "/" + tag + "." + std::to_string(getpid()) + "." +
         std::to_string(counter.fetch_add(1));
}

}  // namespace

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::CompileError: return "CompileError";
    case Outcome::RuntimeError: return "RuntimeError";
    case Outcome::WrongAnswer: return "WrongAnswer";
    case Outcome::TimeLimit: return "TimeLimit";
    case Outcome::Accepted: return "Accepted";
  }
  return "?";
}

ToolchainConfig load_toolchain(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(std::ifstream(path));
  ToolchainConfig config;
  for (auto& [lang, entry] : j.items()) {
    ToolchainEntry e;
    e.compile_cmd = entry.value("compile_cmd", "");
    e.run_cmd = entry.value("run_cmd", "{artifact}");
    e.time_limit_ms = entry.value("time_limit_ms", 2000);
    e.memory_limit_bytes = entry.value("memory_limit_bytes", std::uint64_t(0));
    e.compile_time_limit_ms = entry.value("compile_time_limit_ms", 60000);
    config.languages[lang] = std::move(e);
  }
  return config;
}

CompileResult check_runnable(const std::string& source_path,
                             const ToolchainEntry& toolchain,
                             const std::string& work_dir) {
  fs::create_directories(work_dir);
  CompileResult result;
  std::string artifact =
      work_dir + "/" + fs::path(source_path).stem().string() + ".bin";
  std::string cmd = substitute(toolchain.compile_cmd, "source", source_path);
  cmd = substitute(cmd, "artifact", artifact);
  auto argv = split_command(cmd);
  if (argv.empty()) throw std::runtime_error("empty compile command");

  std::string out_file = unique_temp(work_dir, "compile.out");
  std::string err_file = unique_temp(work_dir, "compile.err");
  RunResult run = run_process(argv, "", out_file, err_file,
                              toolchain.compile_time_limit_ms, 0);
  if (run.exec_failed) throw ToolchainMissing(argv[0]);
  result.log = read_file(err_file);
  fs::remove(out_file);
  fs::remove(err_file);
  if (run.exit_code == 0 && !run.timed_out) {
    result.ok = true;
    result.artifact = artifact;
  }
  return result;
}

bool outputs_match(const std::string& actual, const std::string& expected) {
  auto canonical = [](const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
      if (c == '\n') {
        lines.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) lines.push_back(cur);
    for (auto& line : lines) {
      while (!line.empty() && (line.back() == ' ' || line.back() == '\t' ||
                               line.back() == '\r')) {
        line.pop_back();
      }
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    std::string out;
    for (const auto& line : lines) {
      out += line;
      out += '\n';
    }
    return out;
  };
  return canonical(actual) == canonical(expected);
}

std::vector<Verdict> judge(const std::string& artifact,
                           const std::vector<TaskCase>& cases,
                           const ToolchainEntry& toolchain, std::size_t pool) {
  std::string work_dir = fs::path(artifact).parent_path().string();
  if (work_dir.empty()) work_dir = ".";
  std::string cmd = substitute(toolchain.run_cmd, "artifact", artifact);
  auto argv = split_command(cmd);

  std::vector<Verdict> verdicts(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= cases.size()) return;
      const TaskCase& tc = cases[i];
      Verdict v;
      v.case_id = tc.case_id;
      std::string in_file = unique_temp(work_dir, "case.in");
      std::string out_file = unique_temp(work_dir, "case.out");
      std::string err_file = unique_temp(work_dir, "case.err");
      write_file(in_file, tc.input);
      RunResult run = run_process(argv, in_file, out_file, err_file,
                                  toolchain.time_limit_ms,
                                  toolchain.memory_limit_bytes);
      if (run.exec_failed) {
        v.outcome = Outcome::RuntimeError;
        v.detail = std::string("exec failed: ") + std::strerror(run.exec_errno);
      } else {
        v.wall_ms = run.wall_ms;
        if (run.max_rss_bytes > 0) v.peak_memory_bytes = run.max_rss_bytes;
        if (run.timed_out) {
          v.outcome = Outcome::TimeLimit;
        } else if (run.exit_code != 0 || run.term_signal != 0) {
          v.outcome = Outcome::RuntimeError;
          v.detail = run.term_signal != 0
                         ? "signal " + std::to_string(run.term_signal)
                         : "exit " + std::to_string(run.exit_code);
        } else {
          std::string actual = read_file(out_file);
          v.outcome = outputs_match(actual, tc.expected) ? Outcome::Accepted
                                                         : Outcome::WrongAnswer;
        }
      }
      fs::remove(in_file);
      fs::remove(out_file);
      fs::remove(err_file);
      verdicts[i] = std::move(v);
    }
  };
  if (pool <= 1 || cases.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < std::min(pool, cases.size()); ++t) {
      threads.emplace_back(worker);
    }
    for (auto& t : threads) t.join();
  }
  return verdicts;
}

std::vector<TaskCase> load_cases(const std::string& task_dir) {
  std::vector<std::pair<long, TaskCase>> found;
  for (const auto& entry : fs::directory_iterator(task_dir)) {
    std::string name = entry.path().filename().string();
    if (!starts_with(name, "input_") || !name.ends_with(".txt")) continue;
    std::string k = name.substr(6, name.size() - 6 - 4);
    std::string expected_path = task_dir + "/expected_" + k + ".txt";
    TaskCase tc;
    tc.case_id = k;
    tc.input = read_file(entry.path().string());
    if (fs::exists(expected_path)) tc.expected = read_file(expected_path);
    long order = 0;
    try {
      order = std::stol(k);
    } catch (...) {
      order = std::numeric_limits<long>::max();
    }
    found.emplace_back(order, std::move(tc));
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second.case_id < b.second.case_id;
  });
  std::vector<TaskCase> cases;
  cases.reserve(found.size());
  for (auto& [order, tc] : found) cases.push_back(std::move(tc));
  return cases;
}

std::string render_verdicts_csv(const std::vector<Verdict>& verdicts,
                                bool include_timing) {
  std::ostringstream out;
  if (include_timing) {
    out << "case,outcome,wall_ms,peak_memory_bytes,detail\n";
  } else {
    out << "case,outcome,detail\n";
  }
  for (const auto& v : verdicts) {
    out << csv_quote(v.case_id) << ',' << outcome_name(v.outcome);
    if (include_timing) {
      out << ',';
      if (v.wall_ms) out << format_double(*v.wall_ms);
      out << ',';
      if (v.peak_memory_bytes) out << *v.peak_memory_bytes;
    }
    out << ',' << csv_quote(v.detail) << "\n";
  }
  return out.str();
}

}  // namespace stylo
