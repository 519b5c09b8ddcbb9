#include "sck/index_io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include <cereal/archives/portable_binary.hpp>
#include <cereal/types/vector.hpp>
#include <fmt/format.h>
#include <json.hpp>

namespace sck {

namespace {

struct StoredEdge {
  std::int32_t id = 0, u = 0, v = 0;
  template <class A>
  void serialize(A& ar) {
    ar(id, u, v);
  }
};

struct StoredGraph {
  std::int32_t n = 0;
  std::uint64_t steiner = 0;
  std::vector<StoredEdge> edges;
  template <class A>
  void serialize(A& ar) {
    ar(n, steiner, edges);
  }
};

}  // namespace

void write_index(std::ostream& out, const MultiGraph& g) {
  out.write(kIndexMagic, sizeof kIndexMagic);
  StoredGraph s{g.n(), g.steiner(), {}};
  for (const Edge& e : g.edges()) s.edges.push_back({e.id, e.u, e.v});
  cereal::PortableBinaryOutputArchive ar(out);
  ar(kIndexVersion, s);
}

MultiGraph read_index_graph(std::istream& in) {
  char magic[sizeof kIndexMagic] = {};
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kIndexMagic, sizeof magic) != 0)
    fail(Errc::ParseError, "not an index file (bad magic)");
  std::uint32_t version = 0;
  StoredGraph s;
  try {
    cereal::PortableBinaryInputArchive ar(in);
    ar(version);
    if (version != kIndexVersion) fail(Errc::ParseError, fmt::format("unsupported index version {}", version));
    ar(s);
  } catch (const cereal::Exception& ex) {
    fail(Errc::ParseError, fmt::format("truncated index: {}", ex.what()));
  }
  if (s.n < 1 || s.n > kMaxVertices) fail(Errc::ParseError, fmt::format("bad vertex count {}", s.n));
  std::vector<Edge> edges;
  for (const StoredEdge& e : s.edges) {
    if (e.u < 0 || e.u >= s.n || e.v < 0 || e.v >= s.n) fail(Errc::ParseError, fmt::format("bad edge {}", e.id));
    edges.push_back({e.id, e.u, e.v});
  }
  return MultiGraph::with_ids(s.n, std::move(edges), s.steiner);
}

std::string index_bytes(const MultiGraph& g) {
  std::ostringstream out(std::ios::binary);
  write_index(out, g);
  return out.str();
}

MultiGraph graph_from_index_bytes(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  return read_index_graph(in);
}

void save_index(const std::string& path, const MultiGraph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::ParseError, fmt::format("cannot write {}", path));
  write_index(out, g);
  if (!out) fail(Errc::ParseError, fmt::format("write failed for {}", path));
}

MultiGraph load_index_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::ParseError, fmt::format("cannot open {}", path));
  return read_index_graph(in);
}

IndexStats index_stats(const DualOracle& o) {
  const Carcass& c = o.carcass();
  const MultiGraph& g = c.graph();
  IndexStats s;
  s.n = g.n();
  s.m = g.m();
  s.terminals = popcount(g.steiner());
  s.lambda = o.lambda();
  s.units = c.unit_count();
  s.steiner_units = c.steiner_unit_count();
  s.stretched_units = c.stretched_count();
  s.skeleton_nodes = c.node_count();
  s.skeleton_cycles = static_cast<int>(c.cycles().size());
  s.capacity_entries = o.capacity_entries();
  s.full_entries = o.full_entries();
  return s;
}

std::string stats_json(const IndexStats& s) {
  nlohmann::ordered_json j;
  j["n"] = s.n;
  j["m"] = s.m;
  j["terminals"] = s.terminals;
  j["lambda"] = s.lambda;
  j["units"] = s.units;
  j["steiner_units"] = s.steiner_units;
  j["stretched_units"] = s.stretched_units;
  j["skeleton_nodes"] = s.skeleton_nodes;
  j["skeleton_cycles"] = s.skeleton_cycles;
  j["capacity_only_entries"] = s.capacity_entries;
  j["full_entries"] = s.full_entries;
  return j.dump();
}

}  // namespace sck
