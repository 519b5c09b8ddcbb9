#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "sck/carcass.hpp"

namespace sck {

enum class ClassKind { Singleton, MultiTerminal, Stretched, TerminalUnit };

const char* class_kind_name(ClassKind k);

// Graph in which one class keeps every (lambda+1) partition it has in the
// host. For a class at a skeleton node, each adjacent bunch contributes one
// contracted terminal; for a stretched class, the two tight cuts of one bunch
// it is stretched across are contracted.
struct ClassGraph {
  UnitId unit = -1;
  VSet members = 0;                  // the class, host vertices
  NodeId node = -1;                  // skeleton node of the class, -1 if stretched
  MultiGraph graph;
  std::vector<Vertex> map;           // host vertex -> graph vertex; dropped once indexed
  std::vector<MinimalCut> source;    // per graph vertex: bunch it stands for, e1 < 0 if none
  std::vector<char> source_far;      // whether it stands for the far side of that bunch
  VSet local = 0;                    // the class as graph vertices
  int lambda_w = 0;                  // global mincut of graph

  Vertex local_of(Vertex host_vertex) const;
};

ClassGraph build_class_graph(const Carcass& host, UnitId w);

// Nearest (lambda+1) cuts of u that contain the class terminal s, stored as
// complements.
struct NearestCutFamily {
  Vertex u = -1;
  std::vector<VSet> complements;
  std::vector<char> m_cut;                 // more than one terminal in the complement
  std::vector<std::array<int, 2>> marks;   // per graph vertex, -1 padded
};

// Every Steiner cut of g with capacity exactly cap, oriented to contain s.
std::vector<VSet> cuts_containing(const MultiGraph& g, Vertex s, int cap);

// Inclusion-minimal sides among `cuts` that contain u and miss part of W.
// With small global mincut, cuts covered by two kept ones are dropped until
// every vertex of W carries at most two marks.
NearestCutFamily nearest_cuts(const MultiGraph& g, VSet W, Vertex u, const std::vector<VSet>& cuts, bool small_mincut);

// g plus two parallel edges between x and t.
MultiGraph cover_graph(const MultiGraph& g, Vertex x, Vertex t);
std::pair<MultiGraph, MultiGraph> covering_graphs(const MultiGraph& g, Vertex x, Vertex s, Vertex t);

class ClassIndex {
 public:
  static std::unique_ptr<ClassIndex> build(std::shared_ptr<const Carcass> host, UnitId w);

  ClassKind kind() const { return kind_; }
  VSet members() const { return cw_.members; }
  const ClassGraph& class_graph() const { return cw_; }
  // Class graph vertex of a class member.
  Vertex local_vertex(Vertex v) const { return local(v); }
  const Carcass& host() const { return *host_; }
  int cover_count() const { return static_cast<int>(covers_.size()); }
  const ClassIndex& cover_class(int i) const { return *covers_[i].inner; }
  const Carcass& cover_carcass(int i) const { return *covers_[i].carcass; }
  // Singleton structure of the contracted graph of a multi-terminal class.
  const ClassIndex* merged() const { return merged_.get(); }
  // Skeleton of the class graph on the class terminals, if its mincut is
  // lambda + 1.
  const Carcass* split() const { return split_.get(); }
  Vertex class_terminal() const { return s_local_; }

  // Singleton classes: the family of u in the class graph.
  const NearestCutFamily& family(Vertex u) const;
  const NearestCutFamily& family_local(Vertex local_u) const;
  // Class graph vertex -> vertex of the merged graph.
  const std::vector<Vertex>& merge_map() const { return merge_map_; }
  // Host side of a class graph side.
  VSet lift(VSet local_side) const;
  // Some nearest cut of u (with the class terminal) misses every vs.
  bool belong(Vertex u, const std::vector<Vertex>& vs) const;
  bool belong_local(Vertex u, const std::vector<Vertex>& vs) const;
  // Some (lambda+1) cut of the host separates u and v.
  bool separable(Vertex u, Vertex v) const;
  // Host side of such a cut, containing u.
  VSet witness(Vertex u, Vertex v) const;

  std::size_t stored_entries() const;
  // Entries that capacity queries read; cut complements are left out.
  std::size_t capacity_entries() const;

 private:
  struct Cover {
    std::shared_ptr<const Carcass> carcass;
    std::unique_ptr<ClassIndex> inner;
    Vertex anchor_terminal = -1;
  };

  Vertex local(Vertex host_vertex) const;
  bool separable_local(Vertex u, Vertex v) const;
  std::optional<VSet> witness_local(Vertex u, Vertex v) const;

  ClassKind kind_ = ClassKind::Singleton;
  std::shared_ptr<const Carcass> host_;
  ClassGraph cw_;
  std::vector<std::pair<Vertex, Vertex>> kept_;  // uncontracted host vertex -> local
  Vertex s_local_ = -1;
  std::vector<int> family_of_;                   // local vertex -> index in families_
  std::vector<NearestCutFamily> families_;
  std::vector<Cover> covers_;
  std::vector<Vertex> merge_map_;                // class graph vertex -> merged graph vertex
  std::shared_ptr<const Carcass> merged_host_;
  std::unique_ptr<ClassIndex> merged_;
  std::shared_ptr<const Carcass> split_;
};

enum class CutLevel { AtLambda, AtLambdaPlus1, Above };

const char* cut_level_name(CutLevel l);

class MinPlusOneIndex {
 public:
  static MinPlusOneIndex build(const MultiGraph& g);
  static MinPlusOneIndex build(std::shared_ptr<const Carcass> carcass);

  const Carcass& carcass() const { return *carcass_; }
  std::shared_ptr<const Carcass> carcass_ptr() const { return carcass_; }
  int lambda() const { return carcass_->lambda(); }
  const ClassIndex* class_index(UnitId w) const { return classes_[w].get(); }
  ClassKind class_kind(UnitId w) const;

  CutLevel query_cut(Vertex u, Vertex v) const;
  Cut report_witness(Vertex u, Vertex v, CutLevel level) const;
  bool query_belong(Vertex u, const std::vector<Vertex>& vs) const;

  std::size_t stored_entries() const;

 private:
  std::shared_ptr<const Carcass> carcass_;
  std::vector<std::unique_ptr<ClassIndex>> classes_;  // null for one-vertex classes
};

}  // namespace sck
