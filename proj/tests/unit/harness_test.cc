#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hybridnet/config.h"
#include "hybridnet/error.h"
#include "hybridnet/harness.h"

namespace hybridnet {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

RunRecord record(std::string algorithm, double lambda, double normalized = 1) {
  RunRecord r;
  r.algorithm = std::move(algorithm);
  r.n = 8;
  r.k = 4;
  r.lambda = lambda;
  r.lambda_normalized = normalized;
  return r;
}

ExperimentPlan small_plan() {
  ExperimentPlan plan;
  plan.node_counts = {8, 10};
  plan.degrees = {4};
  plan.demand_model = PfabricModel{30, 1, SizeDistribution::constant(1)};
  plan.algorithms = {Algorithm::kMcSs, Algorithm::kGreedy, Algorithm::kMwm,
                     Algorithm::kOblivious, Algorithm::kLp};
  plan.evals = {EvalSpec{Tau::kSS, 3}};
  plan.repetitions = 3;
  plan.base_seed = 11;
  return plan;
}

TEST(Summary, MeanAndSampleDeviation) {
  auto rows = summarize({record("MWM", 1), record("MWM", 3)});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].count, 2);
  EXPECT_DOUBLE_EQ(rows[0].mean_lambda, 2);
  EXPECT_DOUBLE_EQ(rows[0].sd_lambda, std::sqrt(2.0));
  EXPECT_TRUE(std::isnan(rows[0].ratio_to_lp));

  auto same = summarize({record("LP", 2), record("LP", 2), record("LP", 2)});
  EXPECT_EQ(same[0].sd_lambda, 0);
  EXPECT_EQ(same[0].ratio_to_lp, 1);
}

TEST(Summary, FailuresCountedButExcluded) {
  RunRecord bad = record("MWM", std::nan(""));
  bad.status = "Infeasible";
  auto rows = summarize({record("MWM", 4), bad, record("LP", 2)});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].count, 2);
  EXPECT_EQ(rows[0].failures, 1);
  EXPECT_EQ(rows[0].mean_lambda, 4);
  EXPECT_EQ(rows[0].ratio_to_lp, 2);
  EXPECT_EQ(code_of([] { summarize({}); }), ErrorCode::kEmptyRecordSet);
}

TEST(RunPlan, RecordCountsOrderAndBounds) {
  ExperimentPlan plan = small_plan();
  auto records = run_plan(plan, {1});
  ASSERT_EQ(records.size(), 2u * 1 * 3 * 5);
  std::size_t i = 0;
  for (int n : plan.node_counts) {
    for (std::uint64_t seed : plan_seeds(plan)) {
      double lp = 0;
      for (Algorithm a : plan.algorithms) {
        const RunRecord& r = records[i++];
        EXPECT_EQ(r.algorithm, algorithm_name(a));
        EXPECT_EQ(r.n, n);
        EXPECT_EQ(r.seed, seed);
        ASSERT_TRUE(r.ok()) << r.status << " " << r.message;
        if (a == Algorithm::kOblivious) EXPECT_EQ(r.lambda_normalized, 1);
        if (a == Algorithm::kLp) lp = r.lambda;
      }
      // The relaxation bounds every segregated algorithm from below.
      for (std::size_t j = i - plan.algorithms.size(); j < i; ++j) {
        EXPECT_GE(records[j].lambda, lp - 1e-9) << records[j].algorithm;
      }
    }
  }
  EXPECT_EQ(summarize(records).size(), 2u * 5);
}

TEST(RunPlan, ParallelMatchesSerial) {
  ExperimentPlan plan = small_plan();
  auto serial = run_plan(plan, {1});
  std::vector<std::string> streamed;
  RunOptions options{3, [&](const RunRecord& r) { streamed.push_back(r.algorithm); }};
  auto parallel = run_plan(plan, options);
  ASSERT_EQ(serial.size(), parallel.size());
  ASSERT_EQ(streamed.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].lambda, parallel[i].lambda);
    EXPECT_EQ(serial[i].instance_hash, parallel[i].instance_hash);
    EXPECT_EQ(streamed[i], parallel[i].algorithm);
  }
}

TEST(RunPlan, EmptyDemandGivesZeroCongestion) {
  ExperimentPlan plan = small_plan();
  plan.node_counts = {8};
  plan.repetitions = 1;
  plan.demand_model = PfabricModel{1e-12, 1, SizeDistribution::constant(1)};
  for (const RunRecord& r : run_plan(plan, {1})) {
    ASSERT_TRUE(r.ok()) << r.algorithm << " " << r.message;
    EXPECT_EQ(r.lambda, 0);
    EXPECT_EQ(r.lambda_normalized, 1);
  }
}

TEST(RunPlan, BadInstanceBecomesFailureRecord) {
  ExperimentPlan plan = small_plan();
  plan.node_counts = {7};
  plan.degrees = {3};
  plan.repetitions = 1;
  auto records = run_plan(plan, {1});
  ASSERT_EQ(records.size(), plan.algorithms.size());
  for (const RunRecord& r : records) {
    EXPECT_EQ(r.status, "InvalidDegree");
    EXPECT_TRUE(std::isnan(r.lambda));
  }
  EXPECT_EQ(summarize(records)[0].failures, 1);
  plan.algorithms.clear();
  EXPECT_EQ(code_of([&] { check_plan(plan); }), ErrorCode::kInvalidArgument);
}

TEST(RunPlan, LpNotApplicableForSharedModels) {
  ExperimentPlan plan = small_plan();
  plan.node_counts = {8};
  plan.repetitions = 1;
  plan.evals = {EvalSpec{Tau::kSN, 3}};
  auto records = run_plan(plan, {1});
  EXPECT_EQ(records.back().algorithm, "LP");
  EXPECT_EQ(records.back().status, "NotApplicable");
  EXPECT_TRUE(records.front().ok());
}

TEST(Csv, Headers) {
  std::ostringstream rec;
  write_records_csv(rec, {record("LP", 0.5)});
  EXPECT_EQ(rec.str().substr(0, rec.str().find('\n')),
            "algorithm,n,k,tau,path_limit,seed,lambda,lambda_normalized,wall_time_ms,"
            "matching_size,instance_hash,status");
  std::ostringstream sum;
  write_summary_csv(sum, summarize({record("LP", 0.5)}));
  EXPECT_EQ(sum.str(),
            "algorithm,n,k,tau,count,failures,mean_lambda,sd_lambda,mean_lambda_normalized,"
            "sd_lambda_normalized,ratio_to_lp\nLP,8,4,SS,1,0,0.5,0,1,0,1\n");
}

TEST(Config, WorkloadParsesAndRoundTrips) {
  WorkloadConfig w = parse_workload(
      R"({"n": 40, "k": 4, "seed": 7, "capacity": 2,
          "demand": {"model": "pfabric", "rate": 50, "duration": 2, "sizes": 3}})");
  EXPECT_EQ(w.n, 40);
  EXPECT_EQ(w.seed, 7u);
  EXPECT_EQ(w.default_capacity, 2);
  const auto& p = std::get<PfabricModel>(w.demand_model);
  EXPECT_EQ(p.rate, 50);
  EXPECT_EQ(p.sizes.mean(), 3);
  WorkloadConfig back = parse_workload(workload_to_json(w));
  EXPECT_EQ(back.n, w.n);
  EXPECT_EQ(std::get<PfabricModel>(back.demand_model).duration, 2);

  WorkloadConfig trace =
      parse_workload(R"({"n": 4, "k": 2, "demand": {"model": "trace", "path": "t.csv"}})", "/data");
  EXPECT_EQ(std::get<TraceModel>(trace.demand_model).path, "/data/t.csv");
}

TEST(Config, PlanDefaultsAndUnlimited) {
  ExperimentPlan plan = parse_plan(R"({"n": [8, 10], "k": [4],
      "algorithms": ["MC_SS", "LP"],
      "eval": [{"tau": "SS"}, {"tau": "UN"}, {"tau": "SS", "path_limit": "unlimited"}],
      "seeds": [3, 4]})");
  EXPECT_EQ(plan.node_counts, (std::vector<int>{8, 10}));
  ASSERT_EQ(plan.evals.size(), 3u);
  EXPECT_EQ(plan.evals[0].path_limit, 3);
  EXPECT_EQ(plan.evals[1].path_limit, 1);
  EXPECT_EQ(plan.evals[2].path_limit, 0);
  EXPECT_EQ(plan_seeds(plan), (std::vector<std::uint64_t>{3, 4}));
  ExperimentPlan back = parse_plan(plan_to_json(plan));
  EXPECT_EQ(back.evals[2].path_limit, 0);
  EXPECT_EQ(back.algorithms, plan.algorithms);

  ExperimentPlan derived = parse_plan(R"({"n": [8], "k": [4], "algorithms": ["LP"],
      "eval": [{"tau": "SS"}], "repetitions": 5, "seed": 9})");
  EXPECT_EQ(plan_seeds(derived).size(), 5u);
}

TEST(Config, Errors) {
  for (const char* text : {"{", R"({"n": 4})", R"({"n": [8], "k": [4], "algorithms": ["X"],
                                                    "eval": [{"tau": "SS"}]})",
                           R"({"n": [8], "k": [4], "algorithms": ["LP"],
                               "eval": [{"tau": "SS", "path_limit": -2}]})"}) {
    EXPECT_EQ(code_of([&] { parse_plan(text); }), ErrorCode::kParseError) << text;
  }
  EXPECT_EQ(code_of([] { load_plan("/nonexistent/plan.json"); }), ErrorCode::kIoError);
}

}  // namespace
}  // namespace hybridnet
