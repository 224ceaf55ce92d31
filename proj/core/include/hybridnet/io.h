#ifndef HYBRIDNET_IO_H
#define HYBRIDNET_IO_H

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "hybridnet/model.h"

namespace hybridnet {

// Topology text format, one record per line:
//
//   # comment
//   nodes <n>                                  (optional)
//   S <tail> <head> <cap_forward> <cap_backward>
//   R <tail> <head> <cap_forward> <cap_backward>
//
// The node count is the explicit `nodes` value or 1 + the largest id seen.
// Reconfigurable pairs that are not listed receive default_capacity when it
// is given; otherwise they stay missing (and validation reports them).
HybridNetwork read_topology(std::istream& in,
                            std::optional<double> default_capacity);
HybridNetwork read_topology_file(const std::filesystem::path& path,
                                 std::optional<double> default_capacity);
void write_topology(std::ostream& out, const HybridNetwork& net);

// Demand CSV with header `i,j,demand`. Node ids must lie in [0, num_nodes).
DemandMatrix read_demands(std::istream& in, int num_nodes);
DemandMatrix read_demands_file(const std::filesystem::path& path,
                               int num_nodes);
void write_demands(std::ostream& out, const DemandMatrix& d);

// Matching file: one `u v` pair per line, `#` comments allowed.
Matching read_matching(std::istream& in);
void write_matching(std::ostream& out, const Matching& m);

// Fixed-precision decimal used by every text writer (12 significant digits).
std::string format_decimal(double value);

// FNV-1a 64-bit hash of the serialized topology and demands.
std::uint64_t instance_hash(const HybridNetwork& net, const DemandMatrix& d);
std::string hash_hex(std::uint64_t hash);

}  // namespace hybridnet

#endif  // HYBRIDNET_IO_H
