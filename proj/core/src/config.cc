#include "hybridnet/config.h"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hybridnet {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& message) {
  throw Error(ErrorCode::kParseError, "config: " + message);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    config_error(e.what());
  }
}

template <typename T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(std::string("bad value for \"") + key + "\"");
  }
}

template <typename T>
std::vector<T> get_list(const json& j, const char* key) {
  if (!j.contains(key)) config_error(std::string("missing \"") + key + "\"");
  const json& value = j.at(key);
  try {
    if (value.is_array()) return value.get<std::vector<T>>();
    return {value.get<T>()};
  } catch (const json::exception&) {
    config_error(std::string("bad value for \"") + key + "\"");
  }
}

SizeDistribution parse_sizes(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "web_search") return SizeDistribution::web_search();
    config_error("unknown size distribution \"" + j.get<std::string>() + "\"");
  }
  if (j.is_number()) return SizeDistribution::constant(j.get<double>());
  try {
    return SizeDistribution(j.get<std::vector<std::pair<double, double>>>());
  } catch (const json::exception&) {
    config_error("sizes must be \"web_search\", a number or [[size, p], ...]");
  } catch (const Error& e) {
    config_error(e.what());
  }
}

json sizes_to_json(const SizeDistribution& sizes) {
  json cdf = json::array();
  for (const auto& [size, p] : sizes.cdf()) cdf.push_back({size, p});
  return cdf;
}

std::variant<PfabricModel, TraceModel> parse_demand(
    const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) config_error("\"demand\" must be an object");
  const std::string model = get<std::string>(j, "model", "pfabric");
  if (model == "pfabric") {
    PfabricModel p;
    p.rate = get<double>(j, "rate", p.rate);
    p.duration = get<double>(j, "duration", p.duration);
    if (j.contains("sizes")) p.sizes = parse_sizes(j.at("sizes"));
    return p;
  }
  if (model == "trace") {
    std::filesystem::path path = get<std::string>(j, "path", "");
    if (path.empty()) config_error("trace demand needs \"path\"");
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    return TraceModel{path};
  }
  config_error("unknown demand model \"" + model + "\"");
}

json demand_to_json(const std::variant<PfabricModel, TraceModel>& model) {
  if (const auto* p = std::get_if<PfabricModel>(&model)) {
    return {{"model", "pfabric"},
            {"rate", p->rate},
            {"duration", p->duration},
            {"sizes", sizes_to_json(p->sizes)}};
  }
  return {{"model", "trace"},
          {"path", std::get<TraceModel>(model).path.string()}};
}

EvalSpec parse_eval(const json& j) {
  if (!j.is_object()) config_error("eval entries must be objects");
  const auto tau = parse_tau(get<std::string>(j, "tau", ""));
  if (!tau) config_error("eval entry needs \"tau\" in SS, US, SN, UN");
  EvalSpec spec;
  spec.tau = *tau;
  spec.path_limit = default_path_limit(*tau);
  if (j.contains("path_limit")) {
    const json& limit = j.at("path_limit");
    if (limit.is_string() && limit.get<std::string>() == "unlimited") {
      spec.path_limit = 0;
    } else if (limit.is_number_integer() && limit.get<int>() >= 1) {
      spec.path_limit = limit.get<int>();
    } else {
      config_error("path_limit must be a positive integer or \"unlimited\"");
    }
  }
  spec.trials = get<int>(j, "trials", 0);
  return spec;
}

}  // namespace

WorkloadConfig parse_workload(std::string_view text,
                              const std::filesystem::path& base_dir) {
  const json j = parse_json(text);
  if (!j.is_object()) config_error("workload must be an object");
  WorkloadConfig config;
  config.n = get<int>(j, "n", 0);
  config.k = get<int>(j, "k", 0);
  config.seed = get<std::uint64_t>(j, "seed", 0);
  config.default_capacity = get<double>(j, "capacity", 1.0);
  if (j.contains("demand")) config.demand_model = parse_demand(j.at("demand"), base_dir);
  return config;
}

std::string workload_to_json(const WorkloadConfig& config) {
  json j = {{"n", config.n},
            {"k", config.k},
            {"seed", config.seed},
            {"capacity", config.default_capacity},
            {"demand", demand_to_json(config.demand_model)}};
  return j.dump(2);
}

ExperimentPlan parse_plan(std::string_view text,
                          const std::filesystem::path& base_dir) {
  const json j = parse_json(text);
  if (!j.is_object()) config_error("plan must be an object");
  ExperimentPlan plan;
  plan.node_counts = get_list<int>(j, "n");
  plan.degrees = get_list<int>(j, "k");
  plan.capacity = get<double>(j, "capacity", 1.0);
  if (j.contains("demand")) plan.demand_model = parse_demand(j.at("demand"), base_dir);
  for (const std::string& name : get_list<std::string>(j, "algorithms")) {
    const auto algorithm = parse_algorithm(name);
    if (!algorithm) config_error("unknown algorithm \"" + name + "\"");
    plan.algorithms.push_back(*algorithm);
  }
  if (!j.contains("eval")) config_error("missing \"eval\"");
  const json& evals = j.at("eval");
  if (evals.is_array()) {
    for (const json& e : evals) plan.evals.push_back(parse_eval(e));
  } else {
    plan.evals.push_back(parse_eval(evals));
  }
  plan.repetitions = get<int>(j, "repetitions", 5);
  plan.base_seed = get<std::uint64_t>(j, "seed", 1);
  if (j.contains("seeds")) plan.seeds = get_list<std::uint64_t>(j, "seeds");
  try {
    check_plan(plan);
  } catch (const Error& e) {
    config_error(e.what());
  }
  return plan;
}

std::string plan_to_json(const ExperimentPlan& plan) {
  json algorithms = json::array();
  for (Algorithm a : plan.algorithms) algorithms.push_back(algorithm_name(a));
  json evals = json::array();
  for (const EvalSpec& spec : plan.evals) {
    json e = {{"tau", tau_name(spec.tau)}};
    if (spec.path_limit > 0) {
      e["path_limit"] = spec.path_limit;
    } else {
      e["path_limit"] = "unlimited";
    }
    if (spec.trials > 0) e["trials"] = spec.trials;
    evals.push_back(e);
  }
  json j = {{"n", plan.node_counts},
            {"k", plan.degrees},
            {"capacity", plan.capacity},
            {"demand", demand_to_json(plan.demand_model)},
            {"algorithms", algorithms},
            {"eval", evals},
            {"repetitions", plan.repetitions},
            {"seed", plan.base_seed}};
  if (!plan.seeds.empty()) j["seeds"] = plan.seeds;
  return j.dump(2);
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read plan " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_plan(buffer.str(), path.parent_path());
}

}  // namespace hybridnet
