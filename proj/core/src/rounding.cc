#include "hybridnet/rounding.h"

#include <algorithm>
#include <cmath>

#include "hybridnet/random.h"

namespace hybridnet {

int default_trials(int num_static_links) {
  return static_cast<int>(std::ceil(std::log2(std::max(num_static_links, 2)))) +
         3;
}

namespace {

double max_load(const HybridNetwork& net, const std::vector<double>& flow) {
  double lambda = 0;
  for (LinkId id = 0; id < net.num_links(); ++id) {
    if (flow[id] <= 0) continue;
    const double c = net.link(id).capacity;
    lambda = std::max(lambda, c > 0 ? flow[id] / c : kInfinity);
  }
  return lambda;
}

}  // namespace

Flow randomized_path_rounding(const HybridNetwork& net, const Flow& fractional,
                              const Flow& fixed, int trials,
                              std::uint64_t seed) {
  if (trials < 1) {
    throw Error(ErrorCode::kInvalidArgument, "trials must be positive");
  }
  const int k = static_cast<int>(fractional.commodities.size());
  std::vector<std::vector<int>> options(k);
  for (int p = 0; p < static_cast<int>(fractional.paths.size()); ++p) {
    if (fractional.paths[p].amount > 0) {
      options[fractional.paths[p].commodity].push_back(p);
    }
  }
  for (int c = 0; c < k; ++c) {
    if (options[c].empty() && fractional.commodities[c].demand > 0) {
      throw Error(ErrorCode::kNoRouteForCommodity,
                  "commodity without a path to round");
    }
  }

  const std::vector<double> base = fixed.aggregate(net.num_links());
  std::vector<int> best_choice;
  double best_lambda = kInfinity;
  std::vector<int> choice(k, -1);
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    std::vector<double> load = base;
    for (int c = 0; c < k; ++c) {
      if (options[c].empty()) continue;
      double total = 0;
      for (int p : options[c]) total += fractional.paths[p].amount;
      double r = rng.uniform01() * total;
      int pick = options[c].back();
      for (int p : options[c]) {
        r -= fractional.paths[p].amount;
        if (r < 0) {
          pick = p;
          break;
        }
      }
      choice[c] = pick;
      for (LinkId id : fractional.paths[pick].links) {
        load[id] += fractional.commodities[c].demand;
      }
    }
    const double lambda = max_load(net, load);
    if (best_choice.empty() || lambda < best_lambda) {
      best_lambda = lambda;
      best_choice = choice;
    }
  }

  std::vector<CommodityFlow> commodities;
  std::vector<PathFlow> paths;
  for (int c = 0; c < k; ++c) {
    const CommodityFlow& src = fractional.commodities[c];
    commodities.push_back({src.source, src.target, src.demand, {}});
    if (best_choice[c] >= 0) {
      paths.push_back({c, fractional.paths[best_choice[c]].links, src.demand});
    }
  }
  return flow_from_paths(std::move(commodities), std::move(paths));
}

}  // namespace hybridnet
