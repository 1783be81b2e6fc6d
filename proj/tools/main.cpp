#include <CLI11.hpp>

#include <iostream>

#include "bpsosc/tasks.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Uncoupled BPS structures: oscillators, Stokes data, RH problems and large-N limits"};
  app.set_version_flag("--version", bpsosc::kVersion);
  bpsosc::RunOptions opt;
  std::uint64_t seed = 0;
  app.add_option("--scenario", opt.scenario_path, "scenario JSON file")->required();
  app.add_option("--out", opt.out_dir, "output directory")->default_val(".");
  app.add_option("--task", opt.task, "task to run")->required()->check(CLI::IsMember(bpsosc::task_names()));
  app.add_option("--threads", opt.threads, "worker threads")->default_val(1)->check(CLI::Range(1, 256));
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed, overrides the scenario");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (*seed_opt) opt.seed = seed;

  auto res = bpsosc::run(opt);
  if (res.exit_code != 0) {
    std::cerr << "error: " << res.error << "\n";
  } else {
    for (const auto& line : res.summary) std::cout << line << "\n";
  }
  for (const auto& p : res.outputs) std::cout << "wrote " << p << "\n";
  return res.exit_code;
}
