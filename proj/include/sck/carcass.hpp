#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sck/graph.hpp"

namespace sck {

// Query instrumentation: every structure record a query touches adds one.
namespace probes {
inline thread_local std::uint64_t counter = 0;
inline void add(std::uint64_t k = 1) { counter += k; }
inline void reset() { counter = 0; }
inline std::uint64_t read() { return counter; }
}  // namespace probes

using UnitId = int;
using NodeId = int;

// Block tree nodes: skeleton nodes first, then one hub per cycle.
inline constexpr int kMaxTreeNodes = 384;

// Bitset over block tree preorder positions.
struct TreeMask {
  static constexpr int kWords = kMaxTreeNodes / 64;
  std::array<std::uint64_t, kWords> w{};

  void set(int i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1U; }
  TreeMask operator&(const TreeMask& o) const {
    TreeMask r;
    for (int i = 0; i < kWords; ++i) r.w[i] = w[i] & o.w[i];
    return r;
  }
  int highest() const;
  // Least set index strictly greater than i, or -1.
  int lowest_above(int i) const;
};

// A minimal cut of the skeleton: one tree edge, or two edges of one cycle
// (e1 < e2).
struct MinimalCut {
  int e1 = -1;
  int e2 = -1;
  bool is_tree() const { return e2 < 0; }
  auto operator<=>(const MinimalCut&) const = default;
};

// Skeleton path between two nodes, stored with a <= b.
struct ProperPath {
  NodeId a = -1;
  NodeId b = -1;
  bool operator==(const ProperPath&) const = default;
};

struct Unit {
  VSet members = 0;
  bool steiner = false;
  bool stretched = false;
  ProperPath path;
};

// Tree edge: u is the child, v the parent. Cycle edge: joins nodes[pos] and
// nodes[pos+1 mod k] of its cycle.
struct SkeletonEdge {
  NodeId u = -1;
  NodeId v = -1;
  int cycle = -1;
  int pos = -1;
};

struct SkeletonCycle {
  std::vector<NodeId> nodes;  // nodes[0] is the node nearest the root
  std::vector<int> edges;     // edges[i] joins nodes[i] and nodes[(i+1) % k]
  int hub = -1;               // block tree id
};

enum class Side { Near, Far, Stretched };

enum class IntersectionKind { Disjoint, SharedEdge, SharedCyclePair, SingleNode };

struct PathIntersection {
  IntersectionKind kind = IntersectionKind::Disjoint;
  NodeId node = -1;  // SingleNode
  int edge = -1;     // SharedEdge, or the first path's edge of the cycle pair
  int edge2 = -1;    // the second path's edge of the cycle pair
  int q1 = -1;       // block tree endpoints of the common part
  int q2 = -1;
};

// Order of the units stretched across the bunch of one edge of a shared path.
struct TauGroup {
  ProperPath path;
  int edge = -1;
  MinimalCut cut;
  bool far_is_source = false;
  std::vector<std::pair<UnitId, int>> positions;  // stretched units of the bunch
};

class Carcass {
 public:
  static Carcass build(const MultiGraph& g);

  const MultiGraph& graph() const { return g_; }
  int lambda() const { return lambda_; }
  Vertex s0() const { return s0_; }

  int unit_count() const { return static_cast<int>(units_.size()); }
  const Unit& unit(UnitId u) const { return units_[u]; }
  UnitId phi(Vertex v) const { return phi_[v]; }
  const std::vector<UnitId>& quotient() const { return phi_; }
  int stretched_count() const;
  int steiner_unit_count() const;

  int node_count() const { return node_count_; }
  NodeId root() const { return 0; }
  VSet node_terminals(NodeId x) const { return node_terms_[x]; }
  UnitId node_unit(NodeId x) const { return node_unit_[x]; }
  NodeId terminal_location(Vertex t) const;
  const std::vector<SkeletonEdge>& edges() const { return edges_; }
  const std::vector<SkeletonCycle>& cycles() const { return cycles_; }
  int tree_edge_count() const { return tree_edges_; }
  bool on_cycle(NodeId x) const { return cycle_of_[x] >= 0 || is_top_[x]; }
  // Skeleton degree of a node.
  int skeleton_degree(NodeId x) const { return static_cast<int>(adj_[x].size()); }
  const std::vector<int>& incident_edges(NodeId x) const { return adj_[x]; }
  // Tree edge to the parent, or -1.
  int up_edge(NodeId x) const { return up_edge_[x]; }

  // One minimal cut per bunch. A pair of cycle edges around one node is also
  // accepted by the queries and stands for that node's tree edge.
  std::vector<MinimalCut> minimal_cuts() const;
  void validate_cut(MinimalCut k) const;
  // Terminals on the side away from the root.
  VSet terminal_side(MinimalCut k) const;
  // Preorder interval of the side away from the root.
  std::pair<int, int> far_interval(MinimalCut k) const;
  bool far(int x, MinimalCut k) const;
  Side side_of(ProperPath p, MinimalCut k) const;
  // The minimal cut that an edge of a shared path selects: the tree edge, or
  // the cycle edge with its successor on the cycle.
  MinimalCut cut_of_edge(int e) const;

  // Block tree helpers; every call is one probe.
  int tree_size() const { return static_cast<int>(parent_.size()); }
  bool is_hub(int x) const { return x >= node_count_; }
  int hub_cycle(int h) const { return h - node_count_; }
  int parent(int x) const;
  int depth(int x) const;
  int pre(int x) const;
  int post(int x) const;
  bool is_ancestor(int x, int y) const;
  int lca(int x, int y) const;
  bool on_path(int x, int a, int b) const;
  // Child of x that is an ancestor of y; x must be a proper ancestor of y.
  int child_toward(int x, int y) const;
  // Neighbour of x on the block tree path from x to y (x != y).
  int neighbor_toward(int x, int y) const;
  int distance(int a, int b) const;
  // Number of hubs and tree edges on the root path, inclusive.
  int hubs_above(int x) const;
  int tree_edges_above(int x) const;
  // Edge joining two cycle neighbours of hub h.
  int cycle_edge_between(int h, NodeId y1, NodeId y2) const;
  int cycle_position(int h, NodeId y) const;

  ProperPath projection(UnitId u) const { return units_[u].path; }
  ProperPath edge_projection(EdgeId id) const;
  ProperPath pair_projection(UnitId a, UnitId b) const;
  bool is_proper_path(ProperPath p) const;
  std::vector<int> path_edges(ProperPath p) const;
  PathIntersection path_intersection(ProperPath p1, ProperPath p2) const;
  // Unchecked version for internal callers.
  PathIntersection intersect(ProperPath p1, ProperPath p2) const;

  // Vertices whose unit lies wholly on one side of k.
  VSet tight_side(MinimalCut k, bool far_side) const;
  Cut report_tight_cut(NodeId node, MinimalCut k) const;
  std::optional<Cut> report_separating_mincut(Vertex u, Vertex v) const;

  const std::vector<TauGroup>& tau_groups() const { return tau_; }
  int tau_group_of(UnitId u) const { return group_of_[u]; }

  std::size_t stored_entries() const;

 private:
  // Minimal cut where unit x lies wholly on one side and y does not.
  std::optional<std::pair<MinimalCut, bool>> fixed_split(UnitId x, UnitId y) const;
  MinimalCut isolate_arc(int cycle, int p, int q) const;

  MultiGraph g_;
  int lambda_ = 0;
  Vertex s0_ = 0;

  std::vector<Unit> units_;
  std::vector<UnitId> phi_;

  int node_count_ = 0;
  int tree_edges_ = 0;
  std::vector<VSet> node_terms_;
  std::vector<UnitId> node_unit_;
  std::vector<NodeId> term_loc_;
  std::vector<SkeletonEdge> edges_;
  std::vector<SkeletonCycle> cycles_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> up_edge_;
  std::vector<int> cycle_of_;   // cycle holding a non-top cycle node
  std::vector<int> cycle_pos_;  // its position there
  std::vector<char> is_top_;
  std::vector<NodeId> below_;  // tree child of a cycle node

  std::vector<int> parent_, depth_, pre_, post_, at_pre_, hubs_, tedges_;
  std::vector<TreeMask> anc_;

  std::vector<TauGroup> tau_;
  std::vector<int> group_of_;
};

}  // namespace sck
