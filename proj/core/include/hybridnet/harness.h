#ifndef HYBRIDNET_HARNESS_H
#define HYBRIDNET_HARNESS_H

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hybridnet/nonsegregated.h"
#include "hybridnet/workloads.h"

namespace hybridnet {

enum class Algorithm { kMcSs, kMcUs, kGreedy, kMwm, kOblivious, kLp };

const char* algorithm_name(Algorithm algorithm);  // "MC_SS", "LP", ...
std::optional<Algorithm> parse_algorithm(std::string_view text);

struct ExperimentPlan {
  std::vector<int> node_counts;
  std::vector<int> degrees;
  std::variant<PfabricModel, TraceModel> demand_model = PfabricModel{};
  double capacity = 1;
  std::vector<Algorithm> algorithms;
  // One evaluation per routing model; every algorithm is scored under it.
  std::vector<EvalSpec> evals;
  int repetitions = 5;
  // Explicit seeds win; otherwise `repetitions` seeds derive from base_seed.
  std::vector<std::uint64_t> seeds;
  std::uint64_t base_seed = 1;
};

// Path limit used when a plan does not give one: 3 shortest paths for
// splittable models, 1 for unsplittable ones.
int default_path_limit(Tau tau);

std::vector<std::uint64_t> plan_seeds(const ExperimentPlan& plan);

// Throws kInvalidArgument on an unusable plan.
void check_plan(const ExperimentPlan& plan);

struct RunRecord {
  std::string algorithm;
  int n = 0;
  int k = 0;
  Tau tau = Tau::kSS;
  int path_limit = 0;
  std::uint64_t seed = 0;
  double lambda = 0;
  double lambda_normalized = 0;  // lambda / lambda of Oblivious
  double wall_time_ms = 0;
  int matching_size = 0;
  std::string instance_hash;
  // Empty on success, otherwise the error code name.
  std::string status;
  std::string message;

  bool ok() const { return status.empty(); }
};

struct RunOptions {
  int workers = 0;  // 0: hardware concurrency
  // Called from a single thread, in the final record order.
  std::function<void(const RunRecord&)> on_record;
};

// For every (n, k, seed) the instance is generated once and every algorithm
// is evaluated on it under every EvalSpec. Records come back in a fixed
// order: n, k, seed, eval, algorithm. Failures become records with a status;
// only I/O errors abort the plan.
std::vector<RunRecord> run_plan(const ExperimentPlan& plan,
                                const RunOptions& options = {});

struct SummaryRow {
  std::string algorithm;
  int n = 0;
  int k = 0;
  Tau tau = Tau::kSS;
  int count = 0;
  int failures = 0;
  double mean_lambda = 0;
  double sd_lambda = 0;
  double mean_normalized = 0;
  double sd_normalized = 0;
  // mean_lambda over the LP row's mean_lambda for the same (n, k, tau);
  // NaN if there is no LP row.
  double ratio_to_lp = 0;
};

// Mean and sample standard deviation over the successful records of each
// (algorithm, n, k, tau). Throws kEmptyRecordSet.
std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records);

void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records);
void write_record_jsonl(std::ostream& out, const RunRecord& record);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

}  // namespace hybridnet

#endif  // HYBRIDNET_HARNESS_H
