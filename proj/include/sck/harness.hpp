#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sck/dual.hpp"
#include "sck/graph.hpp"

namespace sck {

// Random spanning tree plus random extra edges (parallel edges allowed) and k
// random terminals. Bounded draws use the raw 64-bit engine output, so a seed
// gives the same graph on every platform.
MultiGraph gen_random(int n, int target_m, int k, std::uint64_t seed);

// Bipartite adjacency: adj[u] is the set of right vertices joined to left u.
struct Bipartite {
  int left = 0;
  int right = 0;
  std::vector<std::uint64_t> adj;

  bool edge(int u, int v) const { return (adj[u] >> v) & 1U; }
  bool operator==(const Bipartite& o) const = default;
};

Bipartite random_bipartite(int left, int right, double density, std::uint64_t seed);

// The balanced dag built from B and its undirected version H. Vertex 0 is s,
// 1 is t, left vertices follow, then right vertices.
struct HardInstance {
  Bipartite b;
  int n = 0;
  std::vector<std::pair<Vertex, Vertex>> arcs;  // directed edges of the dag
  MultiGraph h;                                 // terminals {s, t}

  static constexpr Vertex s = 0;
  static constexpr Vertex t = 1;
  Vertex left_vertex(int u) const { return 2 + u; }
  Vertex right_vertex(int v) const { return 2 + b.left + v; }
};

HardInstance gen_hard_instance(const Bipartite& b);

// Every non-terminal vertex of the dag has equal in- and out-degree.
bool is_balanced(const HardInstance& hi);

// Edge (u,v) of B is declared iff failing one s-u copy and one v-t copy
// lowers the capacity by exactly one.
Bipartite recover_adjacency(const DualOracle& o, int left, int right);
// Same decision from inserting s-v and u-t: an edge iff the capacity rises by
// exactly one.
Bipartite recover_adjacency_by_insertion(const DualOracle& o, int left, int right);

struct Measurement {
  int n = 0;
  int m = 0;
  int terminals = 0;
  int lambda = 0;
  std::size_t capacity_entries = 0;
  std::size_t full_entries = 0;
  // probes per query -> number of queries, by query kind
  std::map<std::string, std::map<std::uint64_t, std::size_t>> probe_histograms;
};

Measurement measure(const DualOracle& o);
std::string measurement_json(const Measurement& m);

struct CorpusEntry {
  std::string family;
  MultiGraph graph;
};

// Test corpus: small random graphs, seeded random graphs up to 12 vertices,
// path, cycle and clique families, and hard instances.
std::vector<CorpusEntry> ci_corpus();
// The hard instances of the corpus with their bipartite graphs.
std::vector<HardInstance> corpus_hard_instances();

}  // namespace sck
