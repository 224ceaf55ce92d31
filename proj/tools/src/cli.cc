#include "hybridnet_cli/cli.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hybridnet/baselines.h"
#include "hybridnet/config.h"
#include "hybridnet/error.h"
#include "hybridnet/harness.h"
#include "hybridnet/io.h"
#include "hybridnet/lp_engine.h"
#include "hybridnet/nonsegregated.h"
#include "hybridnet/paths.h"
#include "hybridnet/rounding.h"
#include "hybridnet/segregated.h"
#include "hybridnet/workloads.h"

namespace hybridnet::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kTopLoads = 10;
constexpr int kExactNodeLimit = 8;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIoError:
      return kExitIo;
    case ErrorCode::kInstanceTooLarge:
      return kExitCapability;
    case ErrorCode::kDuplicateLink:
    case ErrorCode::kNegativeCapacity:
    case ErrorCode::kSelfLoop:
    case ErrorCode::kIncompleteReconfigurableSet:
    case ErrorCode::kNodeOutOfRange:
    case ErrorCode::kInvalidMatching:
    case ErrorCode::kInvalidDegree:
    case ErrorCode::kParseError:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kNotSingleSource:
    case ErrorCode::kNotSingleCommodity:
    case ErrorCode::kNonUniformCapacities:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

// "unlimited" or a nonnegative integer; empty means the default for tau.
int resolve_path_limit(const std::string& text, Tau tau) {
  if (text.empty()) return default_path_limit(tau);
  if (text == "unlimited") return 0;
  int value = -1;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "--path-limit must be a nonnegative integer or 'unlimited'");
  }
  return value;
}

Tau resolve_tau(const std::string& text) {
  auto tau = parse_tau(text);
  if (!tau) throw Error(ErrorCode::kInvalidArgument, "unknown --tau '" + text + "'");
  return *tau;
}

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kInvalidArgument, "bad number for " + what + ": '" + text + "'");
  }
}

// rate=R,duration=T[,size=web_search|S]
PfabricModel parse_pfabric(const std::string& text) {
  PfabricModel model;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "--pfabric expects key=value items");
    }
    std::string key = item.substr(0, eq);
    std::string value = item.substr(eq + 1);
    if (key == "rate") {
      model.rate = parse_number(value, "rate");
    } else if (key == "duration") {
      model.duration = parse_number(value, "duration");
    } else if (key == "size") {
      model.sizes = value == "web_search"
                        ? SizeDistribution::web_search()
                        : SizeDistribution::constant(parse_number(value, "size"));
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown --pfabric key '" + key + "'");
    }
  }
  return model;
}

template <typename Write>
void write_file(const fs::path& path, Write write) {
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  write(file);
  file.flush();
  if (!file) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

std::string link_label(const HybridNetwork& net, LinkId id) {
  const DirectedLink& link = net.link(id);
  return std::to_string(link.tail) + (net.is_static(id) ? "->" : "=>") +
         std::to_string(link.head);
}

std::vector<std::pair<LinkId, double>> top_loads(const CongestionReport& report) {
  std::vector<std::pair<LinkId, double>> loads(report.per_link_loads.begin(),
                                               report.per_link_loads.end());
  std::stable_sort(loads.begin(), loads.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (loads.size() > kTopLoads) loads.resize(kTopLoads);
  return loads;
}

json pairs_json(const Matching& m) {
  json out = json::array();
  for (NodePair p : m.pairs()) out.push_back({p.u, p.v});
  return out;
}

struct SolveOutput {
  std::string algorithm;
  Tau tau = Tau::kSS;
  int path_limit = 0;
  Matching matching;
  CongestionReport report;
  std::optional<double> bound;
  std::string note;
};

void print_report(std::ostream& out, const HybridNetwork& net, const SolveOutput& s,
                  bool as_json) {
  auto loads = top_loads(s.report);
  if (as_json) {
    json doc = {{"algorithm", s.algorithm},
                {"tau", tau_name(s.tau)},
                {"path_limit", s.path_limit},
                {"lambda", format_decimal(s.report.lambda)},
                {"matching", pairs_json(s.matching)}};
    doc["lp_bound"] = s.bound ? json(format_decimal(*s.bound)) : json(nullptr);
    json top = json::array();
    for (auto [id, load] : loads) {
      top.push_back({{"link", link_label(net, id)}, {"load", format_decimal(load)}});
    }
    doc["top_loads"] = top;
    if (!s.note.empty()) doc["note"] = s.note;
    out << doc.dump() << '\n';
    return;
  }
  out << "algorithm: " << s.algorithm << " (tau " << tau_name(s.tau) << ", path limit "
      << (s.path_limit > 0 ? std::to_string(s.path_limit) : "unlimited") << ")\n";
  out << "lambda: " << format_decimal(s.report.lambda) << '\n';
  if (s.bound) out << "lp bound: " << format_decimal(*s.bound) << '\n';
  out << "matching (" << s.matching.size() << " links):";
  for (NodePair p : s.matching.pairs()) out << ' ' << p.u << '-' << p.v;
  out << '\n';
  if (!s.note.empty()) out << "note: " << s.note << '\n';
  if (!loads.empty()) {
    out << "top link loads:\n";
    for (auto [id, load] : loads) {
      out << "  " << link_label(net, id) << ' ' << format_decimal(load) << '\n';
    }
  }
}

struct InstanceArgs {
  std::string topology;
  std::string demands;
  std::optional<double> capacity;
};

Instance load_instance(const InstanceArgs& args) {
  Instance inst;
  inst.net = read_topology_file(args.topology, args.capacity);
  require_valid(inst.net);
  inst.demands = read_demands_file(args.demands, inst.net.num_nodes());
  return inst;
}

void add_instance_options(CLI::App* cmd, InstanceArgs& args) {
  cmd->add_option("--topology", args.topology, "topology file")->required();
  cmd->add_option("--demands", args.demands, "demand CSV")->required();
  cmd->add_option("--capacity", args.capacity,
                  "capacity of reconfigurable pairs missing from the topology");
}

// --- generate ---------------------------------------------------------------

struct GenerateArgs {
  int n = 0;
  int k = 0;
  std::uint64_t seed = 0;
  std::string pfabric;
  std::string trace;
  double capacity = 1;
  std::string out_dir = ".";
  bool json = false;
};

int cmd_generate(const GenerateArgs& args, std::ostream& out) {
  WorkloadConfig config;
  config.n = args.n;
  config.k = args.k;
  config.seed = args.seed;
  config.default_capacity = args.capacity;
  if (!args.trace.empty()) {
    config.demand_model = TraceModel{args.trace};
  } else {
    config.demand_model = parse_pfabric(args.pfabric);
  }
  Instance inst = generate_instance(config);
  fs::path dir(args.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string());
  fs::path topology = dir / "topology.txt";
  fs::path demands = dir / "demands.csv";
  write_file(topology, [&](std::ostream& f) { write_topology(f, inst.net); });
  write_file(demands, [&](std::ostream& f) { write_demands(f, inst.demands); });
  std::string hash = hash_hex(instance_hash(inst.net, inst.demands));
  if (args.json) {
    out << json{{"topology", topology.string()},
                {"demands", demands.string()},
                {"hash", hash},
                {"commodities", inst.demands.size()}}
               .dump()
        << '\n';
  } else {
    out << "wrote " << topology.string() << " and " << demands.string() << '\n';
    out << "commodities: " << inst.demands.size() << '\n';
    out << "instance hash: " << hash << '\n';
  }
  return kExitOk;
}

// --- solve ------------------------------------------------------------------

struct SolveArgs {
  InstanceArgs instance;
  std::string tau = "ss";
  std::string algo = "mc";
  std::string path_limit;
  int trials = 0;
  std::uint64_t seed = 0;
  std::string matching_out;
  std::string dump_lp;
  bool json = false;
};

EvalSpec make_spec(Tau tau, int path_limit, int trials, std::uint64_t seed) {
  EvalSpec spec;
  spec.tau = tau;
  spec.path_limit = path_limit;
  spec.trials = trials;
  spec.seed = seed;
  return spec;
}

SolveOutput solve_exact(const Instance& inst, const EvalSpec& spec) {
  const HybridNetwork& net = inst.net;
  const DemandMatrix& d = inst.demands;
  SolveOutput s;
  DemandClass cls = classify_demands(d);
  if (spec.tau == Tau::kSS && !d.empty() &&
      (cls.single_source() || cls.single_destination())) {
    RoundedSolution sol = solve_single_source_ss(net, d);
    s.matching = sol.matching;
    s.report = sol.report;
    s.note = "single-source enumeration";
    return s;
  }
  if (spec.tau == Tau::kSN && cls.structure == DemandStructure::kSingleCommodity &&
      net.has_uniform_capacities() && net.c_min() > 0) {
    SingleCommodityResult sol = solve_single_commodity_uniform(net, d);
    s.matching = sol.matching;
    s.report = sol.report;
    s.note = sol.proven_optimal ? "single-commodity branch and bound"
                                : "single-commodity branch and bound (budget exhausted, "
                                  "not proven optimal)";
    return s;
  }
  if (net.num_nodes() > kExactNodeLimit) {
    throw Error(ErrorCode::kInstanceTooLarge,
                "exact optimization under tau " + std::string(tau_name(spec.tau)) +
                    " is NP-hard for general demands and this instance has " +
                    std::to_string(net.num_nodes()) +
                    " nodes; the exhaustive oracle handles at most " +
                    std::to_string(kExactNodeLimit));
  }
  ExactResult sol = brute_force_opt(net, d, spec, kExactNodeLimit);
  s.matching = sol.matching;
  s.report = sol.report;
  s.note = "exhaustive search";
  return s;
}

int cmd_solve(const SolveArgs& args, std::ostream& out) {
  Tau tau = resolve_tau(args.tau);
  int path_limit = resolve_path_limit(args.path_limit, tau);
  if (args.trials < 0) throw Error(ErrorCode::kInvalidArgument, "--trials must be >= 0");
  Instance inst = load_instance(args.instance);
  const HybridNetwork& net = inst.net;
  const DemandMatrix& d = inst.demands;
  EvalSpec spec = make_spec(tau, path_limit, args.trials, args.seed);
  if (spec.trials == 0) spec.trials = default_trials(static_cast<int>(net.static_links().size()));

  if (!args.dump_lp.empty()) {
    LpProblem problem =
        path_limit > 0
            ? build_mcrn_path_lp(net, d,
                                 commodity_paths(RoutingGraph::static_only(net), d, path_limit))
            : build_mcrn_lp(net, d);
    write_file(args.dump_lp, [&](std::ostream& f) { problem.program.write_lp_format(f); });
  }

  SolveOutput s;
  s.tau = tau;
  s.path_limit = path_limit;
  s.algorithm = args.algo;
  SegregatedOptions options;
  options.path_limit = path_limit;
  if (args.algo == "mc") {
    RoundedSolution sol = is_splittable(tau) ? solve_ss(net, d, options)
                                             : solve_us(net, d, spec.trials, spec.seed, options);
    s.matching = sol.matching;
    s.bound = sol.lp_lower_bound;
    if (is_segregated(tau)) {
      s.report = sol.report;
    } else {
      s.report = eval_matching(net, d, sol.matching, spec);
      s.note = "matching from the segregated rounding, routed under " +
               std::string(tau_name(tau));
    }
  } else if (args.algo == "greedy" || args.algo == "mwm" || args.algo == "oblivious") {
    s.matching = args.algo == "greedy" ? greedy_matching(net, d)
                 : args.algo == "mwm"  ? max_weight_matching(net, d)
                                       : Matching{};
    s.report = eval_matching(net, d, s.matching, spec);
  } else if (args.algo == "exact") {
    SolveOutput exact = solve_exact(inst, spec);
    exact.algorithm = s.algorithm;
    exact.tau = tau;
    exact.path_limit = path_limit;
    s = std::move(exact);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown --algo '" + args.algo + "'");
  }

  if (!args.matching_out.empty()) {
    write_file(args.matching_out, [&](std::ostream& f) { write_matching(f, s.matching); });
  }
  print_report(out, net, s, args.json);
  return kExitOk;
}

// --- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  InstanceArgs instance;
  std::string matching;
  std::string tau = "ss";
  std::string path_limit;
  int trials = 0;
  std::uint64_t seed = 0;
  bool json = false;
};

int cmd_evaluate(const EvaluateArgs& args, std::ostream& out) {
  Tau tau = resolve_tau(args.tau);
  int path_limit = resolve_path_limit(args.path_limit, tau);
  Instance inst = load_instance(args.instance);
  Matching m;
  if (!args.matching.empty()) {
    std::ifstream file(args.matching);
    if (!file) throw Error(ErrorCode::kIoError, "cannot read " + args.matching);
    m = read_matching(file);
  }
  EvalSpec spec = make_spec(tau, path_limit, args.trials, args.seed);
  if (spec.trials == 0) {
    spec.trials = default_trials(static_cast<int>(inst.net.static_links().size()));
  }
  SolveOutput s;
  s.algorithm = "given";
  s.tau = tau;
  s.path_limit = path_limit;
  s.matching = m;
  s.report = eval_matching(inst.net, inst.demands, m, spec);
  print_report(out, inst.net, s, args.json);
  return kExitOk;
}

// --- experiment -------------------------------------------------------------

struct ExperimentArgs {
  std::string plan;
  std::string out_dir = ".";
  int parallel = 0;
  std::optional<std::uint64_t> seed;
  bool jsonl = false;
};

int cmd_experiment(const ExperimentArgs& args, std::ostream& out) {
  ExperimentPlan plan = load_plan(args.plan);
  if (args.seed) {
    plan.seeds.clear();
    plan.base_seed = *args.seed;
  }
  if (args.parallel < 0) throw Error(ErrorCode::kInvalidArgument, "--parallel must be >= 0");
  fs::path dir(args.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string());

  std::ofstream stream;
  RunOptions options;
  options.workers = args.parallel;
  if (args.jsonl) {
    stream.open(dir / "records.jsonl");
    if (!stream) throw Error(ErrorCode::kIoError, "cannot write records.jsonl");
    options.on_record = [&stream](const RunRecord& r) {
      write_record_jsonl(stream, r);
      stream.flush();
    };
  }
  std::vector<RunRecord> records = run_plan(plan, options);
  write_file(dir / "records.csv", [&](std::ostream& f) { write_records_csv(f, records); });
  std::vector<SummaryRow> rows = summarize(records);
  write_file(dir / "summary.csv", [&](std::ostream& f) { write_summary_csv(f, rows); });

  int failures = 0;
  for (const RunRecord& r : records) failures += r.ok() ? 0 : 1;
  out << "records: " << records.size() << " (" << failures << " not ok)\n";
  out << "wrote " << (dir / "records.csv").string() << " and "
      << (dir / "summary.csv").string() << '\n';
  for (const SummaryRow& row : rows) {
    out << "  " << row.algorithm << " n=" << row.n << " k=" << row.k << ' '
        << tau_name(row.tau) << ": mean lambda " << format_decimal(row.mean_lambda)
        << ", normalized " << format_decimal(row.mean_normalized) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Congestion minimization in hybrid static/reconfigurable networks", "hybridnet"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "generate a k-regular instance");
  generate->add_option("--n", gen.n, "number of nodes")->required();
  generate->add_option("--k", gen.k, "static degree")->required();
  generate->add_option("--seed", gen.seed, "random seed");
  auto* pfabric = generate->add_option("--pfabric", gen.pfabric,
                                       "pFabric demands: rate=R,duration=T[,size=S]");
  generate->add_option("--trace", gen.trace, "trace CSV `src,dst,bytes`")->excludes(pfabric);
  generate->add_option("--capacity", gen.capacity, "capacity of every link");
  generate->add_option("--out-dir", gen.out_dir, "output directory");
  generate->add_flag("--json", gen.json, "machine-readable output");

  SolveArgs sol;
  CLI::App* solve = app.add_subcommand("solve", "choose a matching and route demands");
  add_instance_options(solve, sol.instance);
  solve->add_option("--tau", sol.tau, "ss, us, sn or un");
  solve->add_option("--algo", sol.algo, "mc, greedy, mwm, oblivious or exact");
  solve->add_option("--path-limit", sol.path_limit, "paths per commodity or 'unlimited'");
  solve->add_option("--trials", sol.trials, "rounding trials (0: default)");
  solve->add_option("--seed", sol.seed, "random seed");
  solve->add_option("--matching-out", sol.matching_out, "write the matching here");
  solve->add_option("--dump-lp", sol.dump_lp, "write the relaxation in LP format");
  solve->add_flag("--json", sol.json, "machine-readable output");

  EvaluateArgs ev;
  CLI::App* evaluate = app.add_subcommand("evaluate", "score a given matching");
  add_instance_options(evaluate, ev.instance);
  evaluate->add_option("--matching", ev.matching, "matching file (default: empty)");
  evaluate->add_option("--tau", ev.tau, "ss, us, sn or un");
  evaluate->add_option("--path-limit", ev.path_limit, "paths per commodity or 'unlimited'");
  evaluate->add_option("--trials", ev.trials, "rounding trials (0: default)");
  evaluate->add_option("--seed", ev.seed, "random seed");
  evaluate->add_flag("--json", ev.json, "machine-readable output");

  ExperimentArgs ex;
  CLI::App* experiment = app.add_subcommand("experiment", "run an experiment plan");
  experiment->add_option("--plan", ex.plan, "plan JSON file")->required();
  experiment->add_option("--out-dir", ex.out_dir, "output directory");
  experiment->add_option("--parallel", ex.parallel, "worker threads (0: all cores)");
  experiment->add_option("--seed", ex.seed, "override the plan's base seed");
  experiment->add_flag("--jsonl", ex.jsonl, "also stream records.jsonl");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*generate) return cmd_generate(gen, out);
    if (*solve) return cmd_solve(sol, out);
    if (*evaluate) return cmd_evaluate(ev, out);
    if (*experiment) return cmd_experiment(ex, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace hybridnet::cli
