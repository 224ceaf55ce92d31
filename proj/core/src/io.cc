#include "hybridnet/io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace hybridnet {
namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void parse_error(int line, const std::string& what) {
  throw Error(ErrorCode::kParseError,
              "line " + std::to_string(line) + ": " + what);
}

template <typename T>
bool parse_number(std::string_view text, T* out) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' ||
                           text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), *out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  return in;
}

}  // namespace

std::string format_decimal(double value) {
  if (value == kInfinity) return "inf";
  if (value == -kInfinity) return "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

HybridNetwork read_topology(std::istream& in,
                            std::optional<double> default_capacity) {
  struct Record {
    char kind;
    BidirectedLink link;
  };
  std::vector<Record> records;
  int explicit_nodes = -1;
  int max_id = -1;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string kind;
    fields >> kind;
    if (kind == "nodes") {
      std::string count;
      fields >> count;
      if (!parse_number(count, &explicit_nodes) || explicit_nodes < 1) {
        parse_error(line_no, "bad node count '" + count + "'");
      }
      continue;
    }
    if (kind != "S" && kind != "R") {
      parse_error(line_no, "unknown record kind '" + kind + "'");
    }
    std::string tail, head, fwd, bwd, extra;
    fields >> tail >> head >> fwd >> bwd;
    Record r{kind[0], {}};
    if (!parse_number(tail, &r.link.a) || !parse_number(head, &r.link.b) ||
        !parse_number(fwd, &r.link.capacity_forward) ||
        !parse_number(bwd, &r.link.capacity_backward) || (fields >> extra)) {
      parse_error(line_no, "expected `kind tail head cap_forward cap_backward`");
    }
    if (r.link.a < 0 || r.link.b < 0) parse_error(line_no, "negative node id");
    max_id = std::max({max_id, r.link.a, r.link.b});
    records.push_back(r);
  }
  int n = explicit_nodes > 0 ? explicit_nodes : max_id + 1;
  if (n < 1) throw Error(ErrorCode::kParseError, "topology has no nodes");
  if (max_id >= n) {
    throw Error(ErrorCode::kParseError,
                "node id " + std::to_string(max_id) + " exceeds declared count");
  }
  NetworkBuilder builder(n);
  for (const Record& r : records) {
    if (r.kind == 'S') {
      builder.add_static(r.link.a, r.link.b, r.link.capacity_forward,
                         r.link.capacity_backward);
    } else {
      builder.add_reconfigurable(r.link.a, r.link.b, r.link.capacity_forward,
                                 r.link.capacity_backward);
    }
  }
  if (default_capacity) builder.complete_reconfigurable(*default_capacity);
  return builder.build();
}

HybridNetwork read_topology_file(const std::filesystem::path& path,
                                 std::optional<double> default_capacity) {
  std::ifstream in = open_input(path);
  return read_topology(in, default_capacity);
}

void write_topology(std::ostream& out, const HybridNetwork& net) {
  out << "nodes " << net.num_nodes() << "\n";
  for (const BidirectedLink& l : net.static_links()) {
    out << "S " << l.a << " " << l.b << " " << format_decimal(l.capacity_forward)
        << " " << format_decimal(l.capacity_backward) << "\n";
  }
  for (const BidirectedLink& l : net.reconfigurable_links()) {
    out << "R " << l.a << " " << l.b << " " << format_decimal(l.capacity_forward)
        << " " << format_decimal(l.capacity_backward) << "\n";
  }
}

DemandMatrix read_demands(std::istream& in, int num_nodes) {
  DemandMatrix d(num_nodes);
  std::string raw;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line != "i,j,demand") {
        parse_error(line_no, "expected header `i,j,demand`");
      }
      continue;
    }
    auto c1 = line.find(',');
    auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos) {
      parse_error(line_no, "expected three comma-separated fields");
    }
    NodeId i, j;
    double value;
    std::string_view view(line);
    if (!parse_number(view.substr(0, c1), &i) ||
        !parse_number(view.substr(c1 + 1, c2 - c1 - 1), &j) ||
        !parse_number(view.substr(c2 + 1), &value)) {
      parse_error(line_no, "malformed row '" + line + "'");
    }
    if (!(value >= 0)) parse_error(line_no, "negative demand");
    try {
      d.add(i, j, value);
    } catch (const Error& e) {
      parse_error(line_no, e.what());
    }
  }
  return d;
}

DemandMatrix read_demands_file(const std::filesystem::path& path,
                               int num_nodes) {
  std::ifstream in = open_input(path);
  return read_demands(in, num_nodes);
}

void write_demands(std::ostream& out, const DemandMatrix& d) {
  out << "i,j,demand\n";
  for (const auto& [pair, demand] : d.entries()) {
    out << pair.first << "," << pair.second << "," << format_decimal(demand)
        << "\n";
  }
}

Matching read_matching(std::istream& in) {
  std::vector<NodePair> pairs;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string a, b, extra;
    fields >> a >> b;
    NodePair p;
    if (!parse_number(a, &p.u) || !parse_number(b, &p.v) || (fields >> extra)) {
      parse_error(line_no, "expected `u v`");
    }
    pairs.push_back(p);
  }
  return Matching(std::move(pairs));
}

void write_matching(std::ostream& out, const Matching& m) {
  for (const NodePair& p : m.pairs()) out << p.u << " " << p.v << "\n";
}

std::uint64_t instance_hash(const HybridNetwork& net, const DemandMatrix& d) {
  std::ostringstream os;
  write_topology(os, net);
  write_demands(os, d);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : os.str()) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hash_hex(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace hybridnet
