// Command-line front end for the gpplan shared library.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpplan.h"

namespace {

struct ProblemHandle {
  gpplan_problem* ptr = nullptr;
  ~ProblemHandle() { gpplan_problem_free(ptr); }
};

struct ResultHandle {
  gpplan_result* ptr = nullptr;
  ~ResultHandle() { gpplan_result_free(ptr); }
};

int configError(const std::string& what) {
  std::cerr << "error: " << what << "\n";
  return 2;
}

bool writeFile(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) return false;
  out << content;
  return true;
}

std::vector<double> parseDoubleList(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

// Optional planner overrides shared by plan/replan/benchmark.
struct Overrides {
  std::optional<std::string> algorithm;
  std::optional<long long> n, n_ip, max_iterations, seed;
  std::optional<double> total_time, q_c, eps, sigma_obs, lambda, eta;

  void attach(CLI::App* cmd) {
    cmd->add_option("--algorithm", algorithm, "Planner: gpmp, gpmp2, or igpmp2");
    cmd->add_option("--n", n, "Number of trajectory segments");
    cmd->add_option("--n-ip", n_ip, "Interpolated states per segment");
    cmd->add_option("--max-iterations", max_iterations, "Optimizer iteration cap");
    cmd->add_option("--seed", seed, "Seed recorded in benchmark reports");
    cmd->add_option("--total-time", total_time, "Trajectory duration in seconds");
    cmd->add_option("--q-c", q_c, "GP prior power-spectral density");
    cmd->add_option("--eps", eps, "Obstacle safety distance in meters");
    cmd->add_option("--sigma-obs", sigma_obs, "Obstacle cost weight");
    cmd->add_option("--lambda", lambda, "GPMP prior/obstacle trade-off");
    cmd->add_option("--eta", eta, "GPMP update regularization");
  }

  bool apply(gpplan_problem* problem) const {
    auto ok = [](gpplan_status s) { return s == GPPLAN_OK; };
    if (algorithm && !ok(gpplan_problem_set_algorithm(problem, algorithm->c_str()))) return false;
    if (n && !ok(gpplan_problem_set_int(problem, "N", *n))) return false;
    if (n_ip && !ok(gpplan_problem_set_int(problem, "n_ip", *n_ip))) return false;
    if (max_iterations && !ok(gpplan_problem_set_int(problem, "max_iterations", *max_iterations)))
      return false;
    if (seed && !ok(gpplan_problem_set_int(problem, "seed", *seed))) return false;
    if (total_time && !ok(gpplan_problem_set_real(problem, "total_time", *total_time)))
      return false;
    if (q_c && !ok(gpplan_problem_set_real(problem, "q_c", *q_c))) return false;
    if (eps && !ok(gpplan_problem_set_real(problem, "eps", *eps))) return false;
    if (sigma_obs && !ok(gpplan_problem_set_real(problem, "sigma_obs", *sigma_obs))) return false;
    if (lambda && !ok(gpplan_problem_set_real(problem, "lambda", *lambda))) return false;
    if (eta && !ok(gpplan_problem_set_real(problem, "eta", *eta))) return false;
    return true;
  }
};

int cmdPlan(const std::string& problem_path, const std::string& out_path,
            const std::string& plot_path, const Overrides& overrides) {
  ProblemHandle problem;
  if (gpplan_problem_load(problem_path.c_str(), &problem.ptr) != GPPLAN_OK)
    return configError(gpplan_last_error());
  if (!overrides.apply(problem.ptr)) return configError(gpplan_last_error());

  ResultHandle result;
  if (gpplan_plan(problem.ptr, &result.ptr) != GPPLAN_OK)
    return configError(gpplan_last_error());

  char* json_text = nullptr;
  if (gpplan_result_to_json(result.ptr, &json_text) != GPPLAN_OK)
    return configError(gpplan_last_error());
  const bool written = writeFile(out_path, json_text);
  gpplan_string_free(json_text);
  if (!written) return configError("cannot write '" + out_path + "'");

  if (!plot_path.empty() &&
      gpplan_result_write_svg(problem.ptr, result.ptr, plot_path.c_str()) != GPPLAN_OK)
    return configError(gpplan_last_error());

  const bool feasible = gpplan_result_feasible(result.ptr) != 0;
  std::cout << (feasible ? "feasible" : "infeasible") << " after "
            << gpplan_result_iterations(result.ptr) << " iterations, "
            << gpplan_result_wall_time_seconds(result.ptr) << " s\n";
  return feasible ? 0 : 1;
}

int cmdReplan(const std::string& problem_path, const std::string& out_path,
              const std::string& new_goal, int fixed_index, const std::string& fixed_q,
              const std::string& plot_path, const Overrides& overrides) {
  ProblemHandle problem;
  if (gpplan_problem_load(problem_path.c_str(), &problem.ptr) != GPPLAN_OK)
    return configError(gpplan_last_error());
  if (!overrides.apply(problem.ptr)) return configError(gpplan_last_error());

  const int dof = gpplan_problem_dof(problem.ptr);
  std::vector<double> goal_values, fixed_values;
  if (!new_goal.empty()) {
    goal_values = parseDoubleList(new_goal);
    if (static_cast<int>(goal_values.size()) != dof)
      return configError("--new-goal needs " + std::to_string(dof) + " values");
  }
  if (fixed_index >= 0) {
    fixed_values = parseDoubleList(fixed_q);
    if (static_cast<int>(fixed_values.size()) != dof)
      return configError("--fixed-q needs " + std::to_string(dof) + " values");
  }

  ResultHandle original, replanned;
  if (gpplan_replan(problem.ptr, goal_values.empty() ? nullptr : goal_values.data(), fixed_index,
                    fixed_values.empty() ? nullptr : fixed_values.data(), 1, &original.ptr,
                    &replanned.ptr) != GPPLAN_OK)
    return configError(gpplan_last_error());

  char* original_json = nullptr;
  char* replanned_json = nullptr;
  if (gpplan_result_to_json(original.ptr, &original_json) != GPPLAN_OK ||
      gpplan_result_to_json(replanned.ptr, &replanned_json) != GPPLAN_OK)
    return configError(gpplan_last_error());
  nlohmann::ordered_json out;
  out["original"] = nlohmann::ordered_json::parse(original_json);
  out["replanned"] = nlohmann::ordered_json::parse(replanned_json);
  out["timing"] = {
      {"incremental_seconds", gpplan_result_wall_time_seconds(replanned.ptr)},
      {"batch_seconds", gpplan_result_batch_wall_time_seconds(replanned.ptr)},
      {"touched_cliques", gpplan_result_touched_cliques(replanned.ptr)},
  };
  gpplan_string_free(original_json);
  gpplan_string_free(replanned_json);
  if (!writeFile(out_path, out.dump(2))) return configError("cannot write '" + out_path + "'");

  if (!plot_path.empty() &&
      gpplan_result_write_svg(problem.ptr, replanned.ptr, plot_path.c_str()) != GPPLAN_OK)
    return configError(gpplan_last_error());

  const bool feasible = gpplan_result_feasible(replanned.ptr) != 0;
  std::cout << (feasible ? "feasible" : "infeasible") << ", incremental "
            << gpplan_result_wall_time_seconds(replanned.ptr) << " s vs batch "
            << gpplan_result_batch_wall_time_seconds(replanned.ptr) << " s\n";
  return feasible ? 0 : 1;
}

struct BenchmarkRun {
  std::string problem;
  bool feasible = false;
  double seconds = 0.0;
  int iterations = 0;
};

int cmdBenchmark(const std::string& dir, const std::string& algorithms_csv,
                 const std::string& out_path, int jobs, const Overrides& overrides) {
  std::vector<std::string> problems;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.path().extension() == ".json") problems.push_back(entry.path().string());
  }
  if (ec) return configError("cannot read directory '" + dir + "'");
  if (problems.empty()) return configError("no problem files in '" + dir + "'");
  std::sort(problems.begin(), problems.end());

  std::vector<std::string> algorithms;
  {
    std::stringstream ss(algorithms_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) algorithms.push_back(item);
    }
  }
  if (algorithms.empty()) return configError("no algorithms given");

  nlohmann::ordered_json report;
  report["problems"] = problems;
  report["seed"] = overrides.seed.value_or(0);
  report["algorithms"] = nlohmann::ordered_json::object();

  for (const auto& algorithm : algorithms) {
    std::vector<BenchmarkRun> runs(problems.size());
    std::mutex fail_mutex;
    std::string failure;

    auto worker = [&](std::size_t begin, std::size_t step) {
      for (std::size_t k = begin; k < problems.size(); k += step) {
        ProblemHandle problem;
        if (gpplan_problem_load(problems[k].c_str(), &problem.ptr) != GPPLAN_OK ||
            !overrides.apply(problem.ptr) ||
            gpplan_problem_set_algorithm(problem.ptr, algorithm.c_str()) != GPPLAN_OK) {
          std::lock_guard<std::mutex> lock(fail_mutex);
          failure = std::string(gpplan_last_error()) + " (" + problems[k] + ")";
          return;
        }
        ResultHandle result;
        if (gpplan_plan(problem.ptr, &result.ptr) != GPPLAN_OK) {
          std::lock_guard<std::mutex> lock(fail_mutex);
          failure = std::string(gpplan_last_error()) + " (" + problems[k] + ")";
          return;
        }
        runs[k] = {std::filesystem::path(problems[k]).filename().string(),
                   gpplan_result_feasible(result.ptr) != 0,
                   gpplan_result_wall_time_seconds(result.ptr),
                   gpplan_result_iterations(result.ptr)};
      }
    };

    const int workers = std::max(1, jobs);
    if (workers == 1) {
      worker(0, 1);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(worker, w, workers);
      for (auto& t : pool) t.join();
    }
    if (!failure.empty()) return configError(failure);

    int successes = 0;
    double total_time = 0.0, max_time = 0.0, total_iters = 0.0;
    nlohmann::ordered_json per_problem = nlohmann::ordered_json::array();
    for (const auto& run : runs) {
      per_problem.push_back({{"problem", run.problem},
                             {"feasible", run.feasible},
                             {"time_s", run.seconds},
                             {"iterations", run.iterations}});
      if (run.feasible) {
        ++successes;
        total_time += run.seconds;
        max_time = std::max(max_time, run.seconds);
        total_iters += run.iterations;
      }
    }
    nlohmann::ordered_json entry;
    entry["success_rate"] = static_cast<double>(successes) / runs.size();
    // Timing statistics include only successful runs.
    entry["avg_time_s"] = successes ? total_time / successes : 0.0;
    entry["max_time_s"] = max_time;
    entry["avg_iterations"] = successes ? total_iters / successes : 0.0;
    entry["per_problem"] = std::move(per_problem);
    report["algorithms"][algorithm] = std::move(entry);
  }

  if (!writeFile(out_path, report.dump(2))) return configError("cannot write '" + out_path + "'");
  std::cout << "benchmarked " << problems.size() << " problems x " << algorithms.size()
            << " algorithms -> " << out_path << "\n";
  return 0;
}

int cmdSdf(const std::string& scene_path, const std::string& out_path) {
  char* csv = nullptr;
  if (gpplan_scene_sdf_csv(scene_path.c_str(), &csv) != GPPLAN_OK)
    return configError(gpplan_last_error());
  const bool written = writeFile(out_path, csv);
  gpplan_string_free(csv);
  if (!written) return configError("cannot write '" + out_path + "'");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-time GP motion planning for planar robots"};
  app.require_subcommand(1);

  std::string problem_path, out_path, plot_path;
  Overrides overrides;

  auto* plan = app.add_subcommand("plan", "Solve a planning problem");
  plan->add_option("problem", problem_path, "Problem JSON file")->required();
  plan->add_option("--out", out_path, "Trajectory JSON output")->required();
  plan->add_option("--plot", plot_path, "Optional SVG plot output");
  overrides.attach(plan);

  std::string new_goal, fixed_q;
  int fixed_index = -1;
  auto* replan = app.add_subcommand("replan", "Solve, apply a change, and replan incrementally");
  replan->add_option("problem", problem_path, "Problem JSON file")->required();
  replan->add_option("--out", out_path, "Output JSON (both trajectories + timing)")->required();
  replan->add_option("--new-goal", new_goal, "New goal configuration, comma-separated");
  replan->add_option("--fixed-state", fixed_index, "Support-state index to fix");
  replan->add_option("--fixed-q", fixed_q, "Configuration for --fixed-state, comma-separated");
  replan->add_option("--plot", plot_path, "Optional SVG plot of the replanned trajectory");
  overrides.attach(replan);

  std::string bench_dir, algorithms = "gpmp2";
  int jobs = 1;
  auto* benchmark = app.add_subcommand("benchmark", "Run every problem in a directory");
  benchmark->add_option("dir", bench_dir, "Directory of problem JSON files")->required();
  benchmark->add_option("--algorithms", algorithms, "Comma-separated algorithm list");
  benchmark->add_option("--out", out_path, "Report JSON output")->required();
  benchmark->add_option("--jobs", jobs, "Concurrent planning threads");
  overrides.attach(benchmark);

  std::string scene_path;
  auto* sdf = app.add_subcommand("sdf", "Write the signed distance field of a scene as CSV");
  sdf->add_option("scene", scene_path, "Scene JSON file")->required();
  sdf->add_option("--out", out_path, "CSV output")->required();

  CLI11_PARSE(app, argc, argv);

  if (plan->parsed()) return cmdPlan(problem_path, out_path, plot_path, overrides);
  if (replan->parsed()) {
    if (new_goal.empty() && fixed_index < 0)
      return configError("replan needs --new-goal and/or --fixed-state");
    return cmdReplan(problem_path, out_path, new_goal, fixed_index, fixed_q, plot_path, overrides);
  }
  if (benchmark->parsed()) return cmdBenchmark(bench_dir, algorithms, out_path, jobs, overrides);
  if (sdf->parsed()) return cmdSdf(scene_path, out_path);
  return 2;
}
