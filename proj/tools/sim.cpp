/*
 * Copyright 2026 The orchsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "orchsim/runner.hpp"
#include "orchsim/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct RunJob {
  std::string path;
  std::string out_dir;
};

int run_one(const RunJob& job, std::uint64_t* seed_override, bool explain,
            std::mutex& io) {
  orchsim::Scenario sc;
  try {
    sc = orchsim::load_scenario(job.path);
  } catch (const orchsim::SimError& e) {
    std::lock_guard<std::mutex> lock(io);
    std::cerr << job.path << ": " << e.what() << "\n";
    return kExitValidation;
  }
  if (seed_override) sc.seed = *seed_override;
  if (explain) sc.toggles.explain = true;

  try {
    orchsim::RunReport report = orchsim::run(sc);
    orchsim::write_outputs(report, job.out_dir);
    std::lock_guard<std::mutex> lock(io);
    std::cout << job.path << ": " << report.flows_admitted << "/"
              << report.flows_total << " flows admitted, "
              << report.window_violations << " window violations, "
              << orchsim::fmt_double(report.total_joules) << " J -> "
              << job.out_dir << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::lock_guard<std::mutex> lock(io);
    std::cerr << job.path << ": " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic multi-access service-orchestration simulator"};
  app.require_subcommand(1);

  std::vector<std::string> scenario_paths;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool explain = false;
  unsigned jobs = 1;

  CLI::App* run_cmd = app.add_subcommand("run", "Execute scenario(s)");
  run_cmd->add_option("scenario", scenario_paths, "Scenario JSON file(s)")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_option("--seed", seed, "Override the scenario seed")
      ->each([&](const std::string&) { seed_set = true; });
  run_cmd->add_flag("--explain", explain, "Emit decision attributions");
  run_cmd->add_option("--jobs", jobs, "Run scenarios in parallel")
      ->check(CLI::PositiveNumber);

  std::string validate_path;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Parse and validate a scenario");
  validate_cmd->add_option("scenario", validate_path, "Scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  if (validate_cmd->parsed()) {
    try {
      orchsim::Scenario sc = orchsim::load_scenario(validate_path);
      std::cout << validate_path << ": ok (" << sc.domains.size()
                << " domains, " << sc.workloads.size() << " workloads)\n";
      return kExitOk;
    } catch (const orchsim::SimError& e) {
      std::cerr << validate_path << ": " << e.what() << "\n";
      return kExitValidation;
    }
  }

  std::vector<RunJob> run_jobs;
  for (const std::string& path : scenario_paths) {
    RunJob job;
    job.path = path;
    if (scenario_paths.size() == 1) {
      job.out_dir = out_dir;
    } else {
      job.out_dir = (std::filesystem::path(out_dir) /
                     std::filesystem::path(path).stem())
                        .string();
    }
    run_jobs.push_back(std::move(job));
  }

  std::mutex io;
  std::vector<int> results(run_jobs.size(), kExitOk);
  std::size_t next = 0;
  std::mutex next_mutex;
  auto worker = [&] {
    while (true) {
      std::size_t index;
      {
        std::lock_guard<std::mutex> lock(next_mutex);
        if (next >= run_jobs.size()) return;
        index = next++;
      }
      results[index] = run_one(run_jobs[index], seed_set ? &seed : nullptr,
                               explain, io);
    }
  };
  unsigned worker_count =
      std::min<unsigned>(jobs, static_cast<unsigned>(run_jobs.size()));
  if (worker_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < worker_count; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  int exit_code = kExitOk;
  for (int r : results) exit_code = std::max(exit_code, r);
  return exit_code;
}
