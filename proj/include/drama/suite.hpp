#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "drama/episode.hpp"
#include "drama/scenario.hpp"

namespace drama {

// Per-episode seeds derive from the run seed so episode k is reproducible in
// isolation and pairs exactly across allocators given the same run seed.
inline std::vector<EpisodeResult> run_batch(const ScenarioSpec& spec,
                                            int episodes,
                                            const std::string& trace_dir = "") {
  std::vector<EpisodeResult> out;
  out.reserve(static_cast<std::size_t>(episodes));
  for (int k = 0; k < episodes; ++k) {
    const std::uint64_t seed = derive_seed(spec.seed, static_cast<std::uint64_t>(k));
    if (trace_dir.empty()) {
      out.push_back(run_episode(spec, seed));
    } else {
      std::filesystem::create_directories(trace_dir);
      const std::string path = trace_dir + "/" + spec.name + "_" +
                               to_string(spec.allocator) + "_ep" +
                               std::to_string(k) + ".jsonl";
      std::ofstream f(path);
      if (!f) throw IoError("cannot open trace file " + path);
      out.push_back(run_episode(spec, seed, &f));
    }
  }
  return out;
}

inline nlohmann::json result_row(const ScenarioSpec& spec, int episode,
                                 const EpisodeResult& r) {
  nlohmann::json events = nlohmann::json::array();
  for (const TriggerEvent& e : r.events) events.push_back(to_json(e));
  nlohmann::json row{{"scenario", spec.name},
                     {"allocator", to_string(spec.allocator)},
                     {"episode", episode},
                     {"seed", r.episode_seed},
                     {"success", r.success},
                     {"as", r.as},
                     {"ts", r.ts},
                     {"ticks_used", r.ticks_used},
                     {"assignment_epochs", r.assignment_epochs},
                     {"events", std::move(events)},
                     {"change_tick", r.change_tick},
                     {"dropped_agent", r.dropped_agent},
                     {"dropped_held_task", r.dropped_held_task},
                     {"finisher", r.finisher}};
  return row;
}

namespace detail {

inline double median_of(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  if (n % 2 == 1) return xs[n / 2];
  return (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

inline double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline std::string fmt4(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

}  // namespace detail

// One summary.csv line per run. AS and TS aggregate over successful episodes
// only; failed episodes have no finisher so those fields would be noise.
inline std::string summary_csv_row(const ScenarioSpec& spec,
                                   const std::vector<EpisodeResult>& rs) {
  std::vector<double> as, ts, ticks, epochs;
  int successes = 0;
  for (const EpisodeResult& r : rs) {
    ticks.push_back(static_cast<double>(r.ticks_used));
    epochs.push_back(static_cast<double>(r.assignment_epochs));
    if (r.success) {
      ++successes;
      as.push_back(static_cast<double>(r.as));
      ts.push_back(static_cast<double>(r.ts));
    }
  }
  const double sr = rs.empty() ? 0.0
                               : static_cast<double>(successes) /
                                     static_cast<double>(rs.size());
  std::string row = spec.name + "," + to_string(spec.allocator) + "," +
                    std::to_string(spec.seed) + "," +
                    std::to_string(rs.size()) + "," + detail::fmt4(sr) + "," +
                    detail::fmt4(detail::mean_of(as)) + "," +
                    detail::fmt4(detail::median_of(as)) + "," +
                    detail::fmt4(detail::mean_of(ts)) + "," +
                    detail::fmt4(detail::median_of(ts)) + "," +
                    detail::fmt4(detail::mean_of(ticks)) + "," +
                    detail::fmt4(detail::mean_of(epochs));
  return row;
}

inline constexpr const char* kSummaryHeader =
    "scenario,allocator,seed,episodes,sr,mean_as,median_as,mean_ts,median_ts,"
    "mean_ticks,mean_epochs";

struct RunRequest {
  std::string scenario_path;
  std::optional<AllocatorKind> allocator;  // overrides the scenario's field
  std::optional<std::uint64_t> seed;
  int episodes = 1;
  bool trace = false;
};

struct SuitePlan {
  std::vector<RunRequest> runs;
};

inline SuitePlan load_manifest(const std::string& path) {
  const nlohmann::json j = load_json_file(path);
  if (!j.contains("runs") || !j["runs"].is_array() || j["runs"].empty()) {
    throw ConfigError("/runs", "manifest needs a non-empty runs array");
  }
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  SuitePlan plan;
  std::size_t i = 0;
  for (const auto& run : j["runs"]) {
    const std::string at = "/runs/" + std::to_string(i++);
    if (!run.is_object() || !run.contains("scenario")) {
      throw ConfigError(at, "each run needs a scenario path");
    }
    RunRequest req;
    std::filesystem::path sp = run["scenario"].get<std::string>();
    if (sp.is_relative()) sp = base / sp;
    req.scenario_path = sp.string();
    if (run.contains("allocator")) {
      req.allocator = parse_allocator(run["allocator"].get<std::string>(), at + "/allocator");
    }
    if (run.contains("seed")) req.seed = run["seed"].get<std::uint64_t>();
    if (run.contains("episodes")) {
      req.episodes = run["episodes"].get<int>();
      if (req.episodes < 1) throw ConfigError(at + "/episodes", "must be >= 1");
    }
    if (run.contains("trace")) req.trace = run["trace"].get<bool>();
    plan.runs.push_back(std::move(req));
  }
  return plan;
}

// Executes a run request and appends rows to the open results stream.
inline std::vector<EpisodeResult> execute_run(const RunRequest& req,
                                              const std::string& out_dir,
                                              std::ostream& results,
                                              std::ostream& summary) {
  ScenarioSpec spec = load_scenario(req.scenario_path);
  if (req.allocator) spec.allocator = *req.allocator;
  if (req.seed) spec.seed = *req.seed;
  const std::string trace_dir = req.trace ? out_dir + "/trace" : "";
  std::vector<EpisodeResult> rs = run_batch(spec, req.episodes, trace_dir);
  for (std::size_t k = 0; k < rs.size(); ++k) {
    results << result_row(spec, static_cast<int>(k), rs[k]).dump() << "\n";
  }
  summary << summary_csv_row(spec, rs) << "\n";
  return rs;
}

inline void run_suite(const SuitePlan& plan, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::ofstream results(out_dir + "/results.jsonl");
  std::ofstream summary(out_dir + "/summary.csv");
  if (!results || !summary) throw IoError("cannot write into " + out_dir);
  summary << kSummaryHeader << "\n";
  for (const RunRequest& req : plan.runs) {
    execute_run(req, out_dir, results, summary);
  }
}

}  // namespace drama
