#include "hybridnet/harness.h"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "hybridnet/baselines.h"
#include "hybridnet/io.h"
#include "hybridnet/lp_engine.h"
#include "hybridnet/paths.h"
#include "hybridnet/rounding.h"
#include "hybridnet/segregated.h"

namespace hybridnet {

namespace {

constexpr Algorithm kAllAlgorithms[] = {Algorithm::kMcSs,   Algorithm::kMcUs,
                                        Algorithm::kGreedy, Algorithm::kMwm,
                                        Algorithm::kOblivious, Algorithm::kLp};

struct Task {
  int n;
  int k;
  std::uint64_t seed;
};

struct Outcome {
  double lambda = 0;
  int matching_size = 0;
};

double normalized(double lambda, double reference) {
  if (std::isnan(reference)) return std::nan("");
  if (reference > 0) return lambda / reference;
  return lambda == 0 ? 1.0 : kInfinity;
}

class TaskRunner {
 public:
  TaskRunner(const ExperimentPlan& plan, const Task& task)
      : plan_(plan), task_(task) {}

  std::vector<RunRecord> run() {
    WorkloadConfig config;
    config.n = task_.n;
    config.k = task_.k;
    config.seed = task_.seed;
    config.demand_model = plan_.demand_model;
    config.default_capacity = plan_.capacity;
    try {
      instance_ = generate_instance(config);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kIoError) throw;
      return failed_instance(e);
    }
    hash_ = hash_hex(instance_hash(instance_.net, instance_.demands));

    std::vector<RunRecord> records;
    for (std::size_t e = 0; e < plan_.evals.size(); ++e) {
      EvalSpec spec = plan_.evals[e];
      spec.seed = derive_seed(task_.seed, 100 + e);
      if (spec.trials <= 0) {
        spec.trials = default_trials(
            static_cast<int>(instance_.net.static_links().size()));
      }
      double reference = std::nan("");
      double reference_ms = 0;
      std::optional<Error> reference_error;
      {
        const auto start = std::chrono::steady_clock::now();
        try {
          reference = oblivious(instance_.net, instance_.demands, spec).lambda;
        } catch (const Error& err) {
          reference_error = err;
        }
        reference_ms = elapsed_ms(start);
      }
      for (Algorithm algorithm : plan_.algorithms) {
        RunRecord r = blank(algorithm, spec);
        if (algorithm == Algorithm::kOblivious) {
          r.wall_time_ms = reference_ms;
          if (reference_error) {
            fail(r, *reference_error);
          } else {
            r.lambda = reference;
            mark_unroutable(r);
          }
        } else {
          const auto start = std::chrono::steady_clock::now();
          try {
            std::optional<Outcome> out = evaluate(algorithm, spec);
            if (out) {
              r.lambda = out->lambda;
              r.matching_size = out->matching_size;
              mark_unroutable(r);
            } else {
              r.lambda = std::nan("");
              r.status = "NotApplicable";
              r.message = "the relaxation bounds segregated models only";
            }
          } catch (const Error& err) {
            fail(r, err);
          }
          r.wall_time_ms = elapsed_ms(start);
        }
        r.lambda_normalized = r.ok() ? normalized(r.lambda, reference)
                                     : std::nan("");
        records.push_back(std::move(r));
      }
    }
    return records;
  }

 private:
  static double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  }

  RunRecord blank(Algorithm algorithm, const EvalSpec& spec) const {
    RunRecord r;
    r.algorithm = algorithm_name(algorithm);
    r.n = task_.n;
    r.k = task_.k;
    r.tau = spec.tau;
    r.path_limit = spec.path_limit;
    r.seed = task_.seed;
    r.instance_hash = hash_;
    return r;
  }

  static void fail(RunRecord& r, const Error& e) {
    r.lambda = std::nan("");
    r.status = error_code_name(e.code());
    r.message = e.what();
  }

  static void mark_unroutable(RunRecord& r) {
    if (std::isinf(r.lambda)) {
      r.status = error_code_name(ErrorCode::kNoRouteForCommodity);
    }
  }

  std::vector<RunRecord> failed_instance(const Error& e) const {
    std::vector<RunRecord> records;
    for (const EvalSpec& spec : plan_.evals) {
      for (Algorithm algorithm : plan_.algorithms) {
        RunRecord r = blank(algorithm, spec);
        fail(r, e);
        r.lambda_normalized = std::nan("");
        records.push_back(std::move(r));
      }
    }
    return records;
  }

  Outcome score(const Matching& m, const EvalSpec& spec) const {
    return {eval_matching(instance_.net, instance_.demands, m, spec).lambda,
            static_cast<int>(m.size())};
  }

  std::optional<Outcome> evaluate(Algorithm algorithm, const EvalSpec& spec) const {
    const HybridNetwork& net = instance_.net;
    const DemandMatrix& d = instance_.demands;
    SegregatedOptions options;
    options.path_limit = spec.path_limit;
    switch (algorithm) {
      case Algorithm::kMcSs: {
        RoundedSolution sol = solve_ss(net, d, options);
        if (spec.tau == Tau::kSS) {
          return Outcome{sol.lambda, static_cast<int>(sol.matching.size())};
        }
        return score(sol.matching, spec);
      }
      case Algorithm::kMcUs: {
        RoundedSolution sol = solve_us(net, d, spec.trials, spec.seed, options);
        if (spec.tau == Tau::kUS) {
          return Outcome{sol.lambda, static_cast<int>(sol.matching.size())};
        }
        return score(sol.matching, spec);
      }
      case Algorithm::kGreedy:
        return score(greedy_matching(net, d), spec);
      case Algorithm::kMwm:
        return score(max_weight_matching(net, d), spec);
      case Algorithm::kOblivious:
        return score(Matching{}, spec);
      case Algorithm::kLp: {
        if (!is_segregated(spec.tau)) return std::nullopt;
        if (d.empty()) return Outcome{0, 0};
        LpProblem problem =
            spec.path_limit > 0
                ? build_mcrn_path_lp(net, d,
                                     commodity_paths(RoutingGraph::static_only(net),
                                                     d, spec.path_limit))
                : build_mcrn_lp(net, d);
        LpSolution sol = solve_lp(net, problem);
        if (!sol.optimal()) {
          throw Error(sol.status == LpStatus::kInfeasible
                          ? ErrorCode::kInfeasible
                          : ErrorCode::kNumericalFailure,
                      std::string("relaxation: ") + lp_status_name(sol.status));
        }
        return Outcome{sol.lambda_opt, 0};
      }
    }
    return std::nullopt;
  }

  const ExperimentPlan& plan_;
  Task task_;
  Instance instance_;
  std::string hash_;
};

}  // namespace

const char* algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kMcSs: return "MC_SS";
    case Algorithm::kMcUs: return "MC_US";
    case Algorithm::kGreedy: return "Greedy";
    case Algorithm::kMwm: return "MWM";
    case Algorithm::kOblivious: return "Oblivious";
    case Algorithm::kLp: return "LP";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view text) {
  for (Algorithm a : kAllAlgorithms) {
    if (text == algorithm_name(a)) return a;
  }
  return std::nullopt;
}

int default_path_limit(Tau tau) { return is_splittable(tau) ? 3 : 1; }

std::vector<std::uint64_t> plan_seeds(const ExperimentPlan& plan) {
  if (!plan.seeds.empty()) return plan.seeds;
  std::vector<std::uint64_t> seeds;
  for (int r = 0; r < plan.repetitions; ++r) {
    seeds.push_back(derive_seed(plan.base_seed, static_cast<std::uint64_t>(r)));
  }
  return seeds;
}

void check_plan(const ExperimentPlan& plan) {
  auto bad = [](const std::string& why) {
    throw Error(ErrorCode::kInvalidArgument, "invalid plan: " + why);
  };
  if (plan.node_counts.empty() || plan.degrees.empty()) bad("no n or k values");
  if (plan.algorithms.empty()) bad("no algorithms");
  if (plan.evals.empty()) bad("no eval entries");
  if (plan.repetitions < 1 && plan.seeds.empty()) bad("repetitions must be >= 1");
  for (const EvalSpec& spec : plan.evals) {
    if (spec.path_limit < 0) bad("path_limit must be >= 1 or unlimited");
  }
  if (!(plan.capacity > 0)) bad("capacity must be positive");
}

std::vector<RunRecord> run_plan(const ExperimentPlan& plan,
                                const RunOptions& options) {
  check_plan(plan);
  std::vector<Task> tasks;
  for (int n : plan.node_counts) {
    for (int k : plan.degrees) {
      for (std::uint64_t seed : plan_seeds(plan)) tasks.push_back({n, k, seed});
    }
  }

  std::vector<std::vector<RunRecord>> results(tasks.size());
  std::vector<bool> done(tasks.size(), false);
  std::size_t flushed = 0;
  std::mutex mutex;
  std::exception_ptr failure;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};

  auto worker = [&] {
    while (!abort) {
      const std::size_t i = next++;
      if (i >= tasks.size()) return;
      std::vector<RunRecord> records;
      try {
        records = TaskRunner(plan, tasks[i]).run();
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        abort = true;
        return;
      }
      std::lock_guard lock(mutex);
      results[i] = std::move(records);
      done[i] = true;
      while (flushed < tasks.size() && done[flushed]) {
        if (options.on_record) {
          for (const RunRecord& r : results[flushed]) options.on_record(r);
        }
        ++flushed;
      }
    }
  };

  int workers = options.workers > 0
                    ? options.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max<int>(1, static_cast<int>(tasks.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<RunRecord> all;
  for (auto& records : results) {
    for (RunRecord& r : records) all.push_back(std::move(r));
  }
  return all;
}

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records) {
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyRecordSet, "no records to summarize");
  }
  struct Acc {
    SummaryRow row;
    std::vector<double> lambdas;
    std::vector<double> norms;
  };
  std::vector<Acc> groups;
  std::map<std::tuple<std::string, int, int, Tau>, std::size_t> index;
  for (const RunRecord& r : records) {
    auto key = std::make_tuple(r.algorithm, r.n, r.k, r.tau);
    auto [it, fresh] = index.emplace(key, groups.size());
    if (fresh) {
      Acc acc;
      acc.row.algorithm = r.algorithm;
      acc.row.n = r.n;
      acc.row.k = r.k;
      acc.row.tau = r.tau;
      groups.push_back(std::move(acc));
    }
    Acc& acc = groups[it->second];
    ++acc.row.count;
    if (!r.ok()) {
      ++acc.row.failures;
      continue;
    }
    acc.lambdas.push_back(r.lambda);
    acc.norms.push_back(r.lambda_normalized);
  }

  auto mean_sd = [](const std::vector<double>& xs, double* mean, double* sd) {
    if (xs.empty()) {
      *mean = *sd = std::nan("");
      return;
    }
    double sum = 0;
    for (double x : xs) sum += x;
    *mean = sum / static_cast<double>(xs.size());
    double sq = 0;
    for (double x : xs) sq += (x - *mean) * (x - *mean);
    *sd = xs.size() > 1 ? std::sqrt(sq / static_cast<double>(xs.size() - 1)) : 0.0;
  };

  std::vector<SummaryRow> rows;
  for (Acc& acc : groups) {
    mean_sd(acc.lambdas, &acc.row.mean_lambda, &acc.row.sd_lambda);
    mean_sd(acc.norms, &acc.row.mean_normalized, &acc.row.sd_normalized);
    rows.push_back(acc.row);
  }
  for (SummaryRow& row : rows) {
    row.ratio_to_lp = std::nan("");
    auto lp = index.find(std::make_tuple(std::string("LP"), row.n, row.k, row.tau));
    if (lp != index.end()) {
      const double base = rows[lp->second].mean_lambda;
      if (base > 0) {
        row.ratio_to_lp = row.mean_lambda / base;
      } else if (base == 0 && row.mean_lambda == 0) {
        row.ratio_to_lp = 1;
      }
    }
  }
  return rows;
}

void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "algorithm,n,k,tau,path_limit,seed,lambda,lambda_normalized,"
         "wall_time_ms,matching_size,instance_hash,status\n";
  for (const RunRecord& r : records) {
    out << r.algorithm << ',' << r.n << ',' << r.k << ',' << tau_name(r.tau)
        << ',' << r.path_limit << ',' << r.seed << ',' << format_decimal(r.lambda)
        << ',' << format_decimal(r.lambda_normalized) << ','
        << format_decimal(r.wall_time_ms) << ',' << r.matching_size << ','
        << r.instance_hash << ',' << r.status << '\n';
  }
}

void write_record_jsonl(std::ostream& out, const RunRecord& r) {
  auto number = [](double x) -> nlohmann::json {
    if (std::isfinite(x)) return x;
    return format_decimal(x);
  };
  nlohmann::json j = {
      {"algorithm", r.algorithm},
      {"n", r.n},
      {"k", r.k},
      {"tau", tau_name(r.tau)},
      {"path_limit", r.path_limit},
      {"seed", r.seed},
      {"lambda", number(r.lambda)},
      {"lambda_normalized", number(r.lambda_normalized)},
      {"wall_time_ms", r.wall_time_ms},
      {"matching_size", r.matching_size},
      {"instance_hash", r.instance_hash},
      {"status", r.status},
      {"message", r.message},
  };
  out << j.dump() << '\n';
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "algorithm,n,k,tau,count,failures,mean_lambda,sd_lambda,"
         "mean_lambda_normalized,sd_lambda_normalized,ratio_to_lp\n";
  for (const SummaryRow& r : rows) {
    out << r.algorithm << ',' << r.n << ',' << r.k << ',' << tau_name(r.tau)
        << ',' << r.count << ',' << r.failures << ','
        << format_decimal(r.mean_lambda) << ',' << format_decimal(r.sd_lambda)
        << ',' << format_decimal(r.mean_normalized) << ','
        << format_decimal(r.sd_normalized) << ',' << format_decimal(r.ratio_to_lp)
        << '\n';
  }
}

}  // namespace hybridnet
