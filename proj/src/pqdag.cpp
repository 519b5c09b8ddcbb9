#include "sck/pqdag.hpp"

#include <algorithm>

#include "sck/reference.hpp"

namespace sck {

namespace {

// Reachability closure of one vertex set over successor masks.
VSet closure(const std::vector<VSet>& out, VSet start) {
  VSet seen = start, frontier = start;
  while (frontier) {
    VSet next = 0;
    for_each_vertex(frontier, [&](int v) { next |= out[v]; });
    frontier = next & ~seen;
    seen |= next;
  }
  return seen;
}

}  // namespace

PQDag build_pq_dag(const MultiGraph& g, VSet sources, VSet sinks) {
  auto con = contract(g, {sources, sinks});
  const MultiGraph& h = con.graph;
  const int s = con.map[lowest(sources)], t = con.map[lowest(sinks)];
  ResidualGraph r = max_flow_residual(h, bit(s), bit(t));
  const int n = h.n();

  std::vector<VSet> reach(n), back(n, 0);
  for (int v = 0; v < n; ++v) reach[v] = closure(r.out, bit(v));
  for (int v = 0; v < n; ++v) for_each_vertex(reach[v], [&](int w) { back[w] |= bit(v); });

  PQDag d;
  d.value = r.value;
  std::vector<int> comp_h(n, -1);
  std::vector<VSet> comps_h;
  for (int v = 0; v < n; ++v) {
    if (comp_h[v] >= 0) continue;
    VSet c = reach[v] & back[v];
    for_each_vertex(c, [&](int w) { comp_h[w] = static_cast<int>(comps_h.size()); });
    comps_h.push_back(c);
  }
  const int k = static_cast<int>(comps_h.size());
  d.succ.assign(k, 0);
  for (int v = 0; v < n; ++v)
    for_each_vertex(r.out[v], [&](int w) {
      if (comp_h[w] != comp_h[v]) d.succ[comp_h[v]] |= bit(comp_h[w]);
    });
  d.source = comp_h[s];
  d.sink = comp_h[t];

  // Blocks: closure of the source, the middle, everything reaching the sink.
  VSet from_s = 0, to_t = 0;
  for_each_vertex(reach[s], [&](int w) { from_s |= bit(comp_h[w]); });
  for_each_vertex(back[t], [&](int w) { to_t |= bit(comp_h[w]); });
  std::vector<VSet> comp_reach(k);
  for (int c = 0; c < k; ++c) comp_reach[c] = closure(d.succ, bit(c));
  auto emit = [&](VSet block) {
    // Repeatedly take a component whose successors inside the block are done.
    VSet done = 0;
    while (block & ~done) {
      VSet left = block & ~done;
      int pick = -1;
      for_each_vertex(left, [&](int c) {
        if (pick < 0 && (d.succ[c] & left) == 0) pick = c;
      });
      require(pick >= 0, "residual condensation has a cycle");
      d.order.push_back(pick);
      done |= bit(pick);
    }
  };
  const VSet all_c = full_set(k);
  emit(from_s);
  emit(all_c & ~from_s & ~to_t);
  emit(to_t);
  d.position.assign(k, 0);
  for (int i = 0; i < k; ++i) d.position[d.order[i]] = i;

  d.comps.assign(k, 0);
  d.comp_of.assign(g.n(), 0);
  for (int v = 0; v < g.n(); ++v) {
    int c = comp_h[con.map[v]];
    d.comp_of[v] = c;
    d.comps[c] |= bit(v);
  }
  return d;
}

bool PQDag::is_closed(VSet side) const {
  VSet cs = 0;
  for (size_t c = 0; c < comps.size(); ++c) {
    VSet in = comps[c] & side;
    if (in == 0) continue;
    if (in != comps[c]) return false;
    cs |= bit(static_cast<int>(c));
  }
  if (!has(cs, source) || has(cs, sink)) return false;
  bool ok = true;
  for_each_vertex(cs, [&](int c) { ok = ok && (succ[c] & ~cs) == 0; });
  return ok;
}

}  // namespace sck
