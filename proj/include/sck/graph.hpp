#pragma once

#include <bit>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sck/error.hpp"

namespace sck {

using Vertex = int;
using EdgeId = int;
// Vertex subsets are 64-bit masks; graphs are limited to 64 vertices.
using VSet = std::uint64_t;

inline constexpr int kMaxVertices = 64;

inline constexpr VSet bit(int v) { return VSet{1} << v; }
inline constexpr VSet full_set(int n) { return n >= 64 ? ~VSet{0} : bit(n) - 1; }
inline constexpr bool has(VSet s, int v) { return (s >> v) & 1U; }
inline int popcount(VSet s) { return std::popcount(s); }
inline int lowest(VSet s) { return std::countr_zero(s); }

std::vector<Vertex> members(VSet s);
VSet make_set(const std::vector<Vertex>& vs);

template <class F>
inline void for_each_vertex(VSet s, F&& f) {
  while (s) {
    f(std::countr_zero(s));
    s &= s - 1;
  }
}

struct Edge {
  EdgeId id;
  Vertex u;
  Vertex v;
};

class MultiGraph {
 public:
  MultiGraph() = default;
  // Edges get ids 0..m-1 in the given order.
  MultiGraph(int n, const std::vector<std::pair<Vertex, Vertex>>& edges, VSet steiner);
  // Explicit ids; used by surgery and deserialization.
  static MultiGraph with_ids(int n, std::vector<Edge> edges, VSet steiner);

  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }
  VSet steiner() const { return steiner_; }
  VSet all() const { return full_set(n_); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& incident(Vertex v) const { return incident_[v]; }  // edge indices
  const Edge& edge_by_id(EdgeId id) const;
  bool has_edge_id(EdgeId id) const;
  int index_of(EdgeId id) const;
  EdgeId next_edge_id() const { return next_id_; }
  int degree(Vertex v) const { return static_cast<int>(incident_[v].size()); }
  bool connected() const;
  // Multiplicity matrix row: weight[v][x] = number of parallel edges v-x.
  const std::vector<int>& weights(Vertex v) const { return weights_[v]; }

  MultiGraph with_steiner(VSet steiner) const;

 private:
  void index();

  int n_ = 0;
  VSet steiner_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incident_;
  std::vector<std::vector<int>> weights_;
  std::vector<int> id_index_;
  EdgeId next_id_ = 0;
};

struct Cut {
  VSet side = 0;
  int capacity = 0;
  bool steiner = false;
};

// Capacity without validating the side.
int cut_value(const MultiGraph& g, VSet side);
int capacity(const MultiGraph& g, VSet side);
Cut make_cut(const MultiGraph& g, VSet side);
// Side not containing vertex 0.
VSet canonical(VSet side, int n);

struct CutClassification {
  bool steiner = false;
  bool separates = false;
  bool subdivides = false;
};

CutClassification classify_cut(const MultiGraph& g, VSet side,
                               std::optional<std::pair<Vertex, Vertex>> pair = std::nullopt,
                               std::optional<VSet> x = std::nullopt);

MultiGraph surgery(const MultiGraph& g, const std::vector<EdgeId>& remove,
                   const std::vector<std::pair<Vertex, Vertex>>& add);

struct Contraction {
  MultiGraph graph;
  std::vector<Vertex> map;  // old vertex -> new vertex
};

// Each group becomes one vertex. New ids follow the first occurrence of each
// vertex or group in old id order. A contracted vertex is a terminal iff it
// holds one.
Contraction contract(const MultiGraph& g, const std::vector<VSet>& groups);

MultiGraph parse_graph(std::istream& in);
MultiGraph parse_graph_string(const std::string& text);
MultiGraph load_graph(const std::string& path);
std::string format_graph(const MultiGraph& g);

}  // namespace sck
