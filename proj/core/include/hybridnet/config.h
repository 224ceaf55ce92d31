#ifndef HYBRIDNET_CONFIG_H
#define HYBRIDNET_CONFIG_H

#include <filesystem>
#include <string>
#include <string_view>

#include "hybridnet/harness.h"
#include "hybridnet/workloads.h"

namespace hybridnet {

// JSON configuration files. A workload:
//
//   {"n": 40, "k": 4, "seed": 7, "capacity": 1,
//    "demand": {"model": "pfabric", "rate": 100, "duration": 1,
//               "sizes": "web_search"}}
//
// "sizes" may also be a CDF as [[size, p], ...] or a number (constant
// size); a trace is {"model": "trace", "path": "file.csv"}. A plan has
// "n" and "k" as lists plus:
//
//   "algorithms": ["MC_SS", "Greedy", "MWM", "Oblivious", "LP"],
//   "eval": [{"tau": "SS", "path_limit": 3}],   // or "unlimited"
//   "repetitions": 5, "seed": 1                  // or "seeds": [...]
//
// Relative trace paths resolve against `base_dir`. Errors are kParseError.
WorkloadConfig parse_workload(std::string_view json,
                              const std::filesystem::path& base_dir = {});
std::string workload_to_json(const WorkloadConfig& config);

ExperimentPlan parse_plan(std::string_view json,
                          const std::filesystem::path& base_dir = {});
std::string plan_to_json(const ExperimentPlan& plan);

// Reads a plan file; kIoError if it cannot be read.
ExperimentPlan load_plan(const std::filesystem::path& path);

}  // namespace hybridnet

#endif  // HYBRIDNET_CONFIG_H
