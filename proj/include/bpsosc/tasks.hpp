#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "bpsosc/scenario.hpp"

namespace bpsosc {

// Evaluates fn(0..n-1) on up to `threads` workers. Results are stored by index, so the output does
// not depend on scheduling; the exception of the lowest failing index is rethrown.
template <class F>
auto parallel_map(size_t n, int threads, F&& fn) -> std::vector<decltype(fn(size_t{}))> {
  using T = decltype(fn(size_t{}));
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  size_t workers = std::min<size_t>(n, static_cast<size_t>(std::max(1, threads)));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (size_t k = 0; k < workers; ++k) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// CSV table with fixed columns; cells are already formatted.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  void add(std::vector<std::string> row);
  std::string csv() const;
};

std::string fmt(double x);  // 17 significant digits
std::string fmt(std::int64_t x);
std::string fmt(int x);
std::string fmt(bool x);
std::string csv_quote(const std::string& cell);

struct TaskOutput {
  Table table;
  nlohmann::json detail;
  std::vector<std::string> summary;  // lines for stdout
};

const std::vector<std::string>& task_names();
// Throws ValidationError for unknown names.
TaskOutput run_task(const std::string& task, const Scenario& sc, int threads);

struct RunOptions {
  std::string task;
  std::string scenario_path;
  std::string out_dir;
  int threads = 1;
  std::optional<std::uint64_t> seed;
};

struct RunResult {
  int exit_code = 0;
  std::string hash;
  std::vector<std::string> outputs;  // paths written, manifest last
  std::vector<std::string> summary;
  std::string error;  // "field: message" when exit_code != 0
};

// Loads the scenario, runs the task and writes <task>-<hash>.csv, .json and .manifest.json.
RunResult run(const RunOptions& opt);

}  // namespace bpsosc
