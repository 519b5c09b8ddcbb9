#pragma once

#include <vector>

#include "sck/graph.hpp"

namespace sck {

// Strongly connected components of the residual graph of a maximum flow
// between two vertex sets, with the sources and the sinks each merged into one
// component. Every prefix of `order` that contains the source component and
// not the sink component is the source side of a minimum cut.
struct PQDag {
  int value = 0;
  std::vector<VSet> comps;
  std::vector<int> comp_of;  // vertex -> component
  std::vector<VSet> succ;    // component -> set of successor components
  std::vector<int> order;    // components; successors come first
  std::vector<int> position; // component -> index in order
  int source = 0;
  int sink = 0;

  // True iff side is a union of components closed under successors that
  // holds the source component and not the sink component.
  bool is_closed(VSet side) const;
};

PQDag build_pq_dag(const MultiGraph& g, VSet sources, VSet sinks);

}  // namespace sck
