#pragma once

#include <climits>
#include <vector>

#include "sck/graph.hpp"

namespace sck {

inline constexpr int kEnumerationLimit = 20;

struct FlowResult {
  int value = 0;
  VSet min_source_side = 0;  // reachable from the sources in the residual graph
  VSet max_source_side = 0;  // complement of the vertices that reach a sink
};

// Unit-capacity augmenting path max-flow between two vertex sets.
FlowResult max_flow_mincut(const MultiGraph& g, VSet sources, VSet sinks);
// Residual arcs after a maximum flow: out[a] holds every b reachable by one
// arc with spare capacity.
struct ResidualGraph {
  int value = 0;
  std::vector<VSet> out;
};
ResidualGraph max_flow_residual(const MultiGraph& g, VSet sources, VSet sinks);

// Same flow, stopped once `limit` units are routed.
int flow_value(const MultiGraph& g, VSet sources, VSet sinks, int limit = INT_MAX);

struct SteinerMincut {
  int lambda = 0;
  Cut witness;
};

SteinerMincut steiner_mincut(const MultiGraph& g);
int steiner_lambda(const MultiGraph& g);
// Least capacity of a Steiner cut with u and v on opposite sides.
int min_steiner_cut_separating(const MultiGraph& g, Vertex u, Vertex v, int limit = INT_MAX);

struct CutFamily {
  int lambda_S = 0;
  std::vector<Cut> mincuts;
  std::vector<Cut> plus1cuts;
};

// Every Steiner bipartition (canonical side, vertex 0 outside) of capacity at
// most cap_limit, split by capacity.
CutFamily enumerate_cuts(const MultiGraph& g, int cap_limit);
// enumerate_cuts with cap_limit = lambda_S + 1.
CutFamily cut_family(const MultiGraph& g);
// All Steiner cuts with capacity <= cap_limit, unsorted by capacity.
std::vector<Cut> steiner_cuts_upto(const MultiGraph& g, int cap_limit);

// Partition of V into (lambda_S+1)-connectivity classes, via pairwise flows.
std::vector<VSet> connectivity_classes(const MultiGraph& g);
// Same partition derived from an explicit list of Steiner mincuts.
std::vector<VSet> classes_from_mincuts(int n, const std::vector<Cut>& mincuts);

// Inclusion-minimal mincut side containing terminal subset A of its bunch.
Cut tight_cut(const MultiGraph& g, VSet A);

}  // namespace sck
