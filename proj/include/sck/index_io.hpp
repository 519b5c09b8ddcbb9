#pragma once

#include <iosfwd>
#include <string>

#include "sck/dual.hpp"
#include "sck/graph.hpp"

namespace sck {

// Index file: the magic "SCK1", a format version, then the graph in cereal
// portable binary. Loading rebuilds the oracle from the stored graph.
inline constexpr char kIndexMagic[4] = {'S', 'C', 'K', '1'};
inline constexpr std::uint32_t kIndexVersion = 1;

void write_index(std::ostream& out, const MultiGraph& g);
MultiGraph read_index_graph(std::istream& in);

std::string index_bytes(const MultiGraph& g);
MultiGraph graph_from_index_bytes(const std::string& bytes);

void save_index(const std::string& path, const MultiGraph& g);
MultiGraph load_index_graph(const std::string& path);

struct IndexStats {
  int n = 0;
  int m = 0;
  int terminals = 0;
  int lambda = 0;
  int units = 0;
  int steiner_units = 0;
  int stretched_units = 0;
  int skeleton_nodes = 0;
  int skeleton_cycles = 0;
  std::size_t capacity_entries = 0;
  std::size_t full_entries = 0;
};

IndexStats index_stats(const DualOracle& o);
std::string stats_json(const IndexStats& s);

}  // namespace sck
