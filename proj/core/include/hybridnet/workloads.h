#ifndef HYBRIDNET_WORKLOADS_H
#define HYBRIDNET_WORKLOADS_H

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hybridnet/model.h"
#include "hybridnet/random.h"

namespace hybridnet {

// Discrete flow-size law given by its CDF: (size, cumulative probability)
// points with nondecreasing sizes and probabilities ending at 1.
class SizeDistribution {
 public:
  SizeDistribution() = default;
  explicit SizeDistribution(std::vector<std::pair<double, double>> cdf);

  // Heavy-tailed web-search flow sizes, in packets.
  static SizeDistribution web_search();
  static SizeDistribution constant(double size);

  const std::vector<std::pair<double, double>>& cdf() const { return cdf_; }
  double mean() const;
  double sample(Rng& rng) const;

 private:
  std::vector<std::pair<double, double>> cdf_;
};

struct PfabricModel {
  double rate = 300;  // flow arrivals per unit time
  double duration = 1;
  SizeDistribution sizes = SizeDistribution::web_search();
};

struct TraceModel {
  std::filesystem::path path;
};

struct WorkloadConfig {
  int n = 0;
  int k = 0;
  std::uint64_t seed = 0;
  std::variant<PfabricModel, TraceModel> demand_model = PfabricModel{};
  // Applied to both directions of every static and reconfigurable link.
  double default_capacity = 1;
};

// Throws kInvalidDegree, or kInvalidArgument for bad rates or capacities.
void check_config(const WorkloadConfig& config);

// Uniformly random simple connected k-regular static graph plus a complete
// reconfigurable set. Throws kInvalidDegree if n*k is odd or k >= n, and
// kGenerationTimeout after 10^4 rejected samples.
HybridNetwork gen_k_regular(int n, int k, std::uint64_t seed,
                            double capacity = 1);

// Poisson flow arrivals over [0, duration) between uniformly random ordered
// pairs; flow sizes aggregate per pair.
DemandMatrix gen_pfabric_demands(int n, double rate, double duration,
                                 const SizeDistribution& sizes,
                                 std::uint64_t seed);

struct TraceSummary {
  int num_nodes = 0;
  std::size_t nonzero = 0;
  double total = 0;
  // original_ids[v] is the id used in the file for dense node v.
  std::vector<std::int64_t> original_ids;
};

struct Trace {
  DemandMatrix demands;
  TraceSummary summary;
};

// Reads a demand CSV with arbitrary nonnegative node ids and renumbers the
// ids that occur densely, in ascending order.
Trace load_trace(const std::filesystem::path& path);

struct Instance {
  HybridNetwork net;
  DemandMatrix demands;
};

// Topology and demands for one configuration; the two use independent
// streams derived from config.seed.
Instance generate_instance(const WorkloadConfig& config);

}  // namespace hybridnet

#endif  // HYBRIDNET_WORKLOADS_H
