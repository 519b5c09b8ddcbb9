#pragma once

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "sck/carcass.hpp"
#include "sck/minplus1.hpp"

namespace sck {

// For pairs of stretched units whose paths share an edge: whether the second
// unit lies in the nearest mincut of the first, once for each end of the
// first unit's path. The answer is the same for every bunch on the shared
// part, so one bunch per pair is evaluated at build.
class NearestMincutMatrix {
 public:
  static NearestMincutMatrix build(const Carcass& c);

  // w lies in the minimal mincut of bunch k that holds unit v and the side of
  // k given by far_side. Both units must be stretched across k.
  bool member(const Carcass& c, UnitId v, UnitId w, MinimalCut k, bool far_side) const;
  // Raw entry: bit 0 for the end pi(v).a, bit 1 for pi(v).b; nullopt when
  // the paths share no edge.
  std::optional<int> entry(UnitId v, UnitId w) const;
  std::size_t entries() const { return stored_; }

 private:
  std::vector<int> index_;           // unit -> stretched index, -1 otherwise
  int count_ = 0;
  std::vector<signed char> bits_;    // count_ x count_, -1 when no shared edge
  std::size_t stored_ = 0;
};

// Mincut search over one skeleton: decides whether two edges can cross one
// mincut together.
class MincutPairIndex {
 public:
  static MincutPairIndex build(std::shared_ptr<const Carcass> c);

  const Carcass& carcass() const { return *c_; }
  const NearestMincutMatrix& matrix() const { return m_; }
  bool common(Vertex a, Vertex b, Vertex c, Vertex d) const;
  // Side of a mincut crossed by both edges.
  std::optional<VSet> common_side(Vertex a, Vertex b, Vertex c, Vertex d) const;
  std::size_t entries() const { return c_->stored_entries() + m_.entries(); }

 private:
  struct Hit {
    MinimalCut cut;
    Vertex in[2];
  };
  std::optional<Hit> search(Vertex a, Vertex b, Vertex c, Vertex d) const;

  std::shared_ptr<const Carcass> c_;
  NearestMincutMatrix m_;
};

// Greedy terminal labels of the (lambda+1) cuts of a class graph.
struct SteinerLabels {
  std::vector<Vertex> sstar;
  std::vector<VSet> cuts;    // sorted, each oriented to hold the class terminal
  std::vector<int> label;    // per cut: a vertex of sstar, or -1
  int label_of(VSet cut) const;
};

// cuts must be every (lambda+1) cut of gw that contains s and misses part of W.
SteinerLabels construct_sstar(const MultiGraph& gw, VSet W, Vertex s, int cap, const std::vector<VSet>& cuts);

// Counts of label properties over every singleton structure of an oracle.
struct LabelAudit {
  std::size_t structures = 0;
  std::size_t cuts = 0;
  std::size_t unlabeled = 0;       // cuts without a label
  std::size_t unsound = 0;         // label outside the cut's complement
  std::size_t pairs = 0;           // nearest-cut pairs passing the necessary condition
  std::size_t joint_unlabeled = 0; // joint terminal but different or missing labels
  std::size_t label_no_joint = 0;  // same label without a joint terminal
};

class DualOracle;
LabelAudit audit_labels(const DualOracle& o);

enum class FailureCase { SameClass, SeparateClasses, OneCrossing, BothCrossing };

const char* failure_case_name(FailureCase c);

struct FailureClass {
  FailureCase kind = FailureCase::SeparateClasses;
  UnitId cls = -1;     // SameClass
  EdgeId live = -1;    // OneCrossing: the edge between classes
};

enum class InsertionShape { Suppressive, FourCycleOrJunction, TwoThreeJunctions, OneThreeJunction, Path };

const char* insertion_shape_name(InsertionShape s);

struct InsertionPlan {
  InsertionShape shape = InsertionShape::Path;
  std::vector<NodeId> leaves;            // skeleton leaves, ascending
  std::vector<UnitId> leaf_units;        // class at each of the first five leaves
  std::vector<NodeId> branches;          // nodes of degree three or more
  std::vector<VSet> leaf_sides;          // tight cut of each leaf, first five leaves
  // Four leaves: one bunch per realized split of the leaves (mask without leaf 0).
  std::map<int, MinimalCut> leaf_splits;
  // Path shape: S and T are the two leaf classes.
  VSet unit_s = 0, unit_t = 0;
  std::optional<VSet> joint_side;        // a (lambda+1) cut with S and T on one side
  std::vector<char> sep_s, sep_t;        // triangular tables over class members
};

class DualOracle {
 public:
  static DualOracle build(const MultiGraph& g);

  const Carcass& carcass() const { return *carcass_; }
  const MinPlusOneIndex& minplus1() const { return plus1_; }
  const NearestMincutMatrix& matrix() const { return pairs_.matrix(); }
  const InsertionPlan& insertion_plan() const { return plan_; }
  int lambda() const { return carcass_->lambda(); }

  FailureClass classify_failure(EdgeId e, EdgeId f) const;
  int query_fail_capacity(EdgeId e, EdgeId f) const;
  // Steiner cut of the graph without e and f achieving the new capacity.
  Cut query_fail_cut(EdgeId e, EdgeId f) const;

  int query_insert_capacity(std::pair<Vertex, Vertex> e, std::pair<Vertex, Vertex> f) const;
  Cut query_insert_cut(std::pair<Vertex, Vertex> e, std::pair<Vertex, Vertex> f) const;

  std::pair<int, Cut> single_edge_fail(EdgeId e) const;
  std::pair<int, Cut> single_edge_insert(Vertex a, Vertex b) const;

  // Labels of a singleton class structure reachable from this oracle.
  const SteinerLabels* labels(const ClassIndex* ci) const;
  // Per local vertex of a singleton class structure: label of each stored
  // nearest cut.
  const std::vector<std::vector<int>>* family_labels(const ClassIndex* ci) const;
  const MincutPairIndex* split_pairs(const ClassIndex* ci) const;

  std::size_t capacity_entries() const;
  std::size_t full_entries() const;

 private:
  struct LabelInfo {
    SteinerLabels labels;
    std::vector<std::vector<int>> by_family;
  };
  struct FailResult {
    int capacity = 0;
    std::optional<VSet> side;
  };
  struct InsertResult {
    int capacity = 0;
    VSet side = 0;
  };

  void add_labels(const ClassIndex& ci);
  void add_class(const ClassIndex& ci);
  FailResult fail_eval(EdgeId e, EdgeId f, bool want_side) const;
  InsertResult insert_eval(std::pair<Vertex, Vertex> e, std::pair<Vertex, Vertex> f, bool want_side) const;
  std::optional<VSet> same_class(const ClassIndex& ci, Vertex x, Vertex y, Vertex x2, Vertex y2, bool want_side) const;
  std::optional<VSet> singleton_pair(const ClassIndex& ci, Vertex x, Vertex y, Vertex x2, Vertex y2, bool want_side) const;
  void build_plan();

  std::shared_ptr<const Carcass> carcass_;
  MinPlusOneIndex plus1_;
  MincutPairIndex pairs_;
  std::map<const ClassIndex*, LabelInfo> labels_;
  std::map<const ClassIndex*, MincutPairIndex> splits_;
  InsertionPlan plan_;
  VSet some_mincut_ = 0;
};

}  // namespace sck
