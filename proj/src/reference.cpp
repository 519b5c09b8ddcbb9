#include "sck/reference.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

namespace sck {

namespace {

class UnitFlow {
 public:
  UnitFlow(const MultiGraph& g, VSet sources, VSet sinks)
      : g_(g), src_(sources & g.all()), snk_(sinks & g.all()), flow_(g.m(), 0) {
    if (src_ == 0 || snk_ == 0) fail(Errc::EmptySide, "flow needs sources and sinks");
    if (src_ & snk_) fail(Errc::OverlappingTerminals, "sources and sinks intersect");
  }

  int run(int limit) {
    while (value_ < limit && augment()) ++value_;
    return value_;
  }

  VSet reachable_from_sources() const {
    VSet seen = src_;
    std::vector<Vertex> queue = members(src_);
    for (size_t h = 0; h < queue.size(); ++h) {
      Vertex a = queue[h];
      for (int i : g_.incident(a)) {
        const Edge& e = g_.edges()[i];
        Vertex b = e.u == a ? e.v : e.u;
        if (!has(seen, b) && residual(i, a) > 0) {
          seen |= bit(b);
          queue.push_back(b);
        }
      }
    }
    return seen;
  }

  std::vector<VSet> residual_arcs() const {
    std::vector<VSet> out(g_.n(), 0);
    for (int i = 0; i < g_.m(); ++i) {
      const Edge& e = g_.edges()[i];
      if (residual(i, e.u) > 0) out[e.u] |= bit(e.v);
      if (residual(i, e.v) > 0) out[e.v] |= bit(e.u);
    }
    return out;
  }

  VSet reaching_sinks() const {
    VSet seen = snk_;
    std::vector<Vertex> queue = members(snk_);
    for (size_t h = 0; h < queue.size(); ++h) {
      Vertex b = queue[h];
      for (int i : g_.incident(b)) {
        const Edge& e = g_.edges()[i];
        Vertex a = e.u == b ? e.v : e.u;
        if (!has(seen, a) && residual(i, a) > 0) {
          seen |= bit(a);
          queue.push_back(a);
        }
      }
    }
    return seen;
  }

 private:
  // Residual capacity of edge index i traversed from vertex a.
  int residual(int i, Vertex a) const { return g_.edges()[i].u == a ? 1 - flow_[i] : 1 + flow_[i]; }

  bool augment() {
    std::vector<int> via(g_.n(), -1);
    VSet seen = src_;
    std::vector<Vertex> queue = members(src_);
    for (size_t h = 0; h < queue.size(); ++h) {
      Vertex a = queue[h];
      for (int i : g_.incident(a)) {
        const Edge& e = g_.edges()[i];
        Vertex b = e.u == a ? e.v : e.u;
        if (has(seen, b) || residual(i, a) <= 0) continue;
        seen |= bit(b);
        via[b] = i;
        if (has(snk_, b)) {
          for (Vertex x = b; !has(src_, x);) {
            int j = via[x];
            const Edge& f = g_.edges()[j];
            Vertex y = f.u == x ? f.v : f.u;
            flow_[j] += f.u == y ? 1 : -1;
            x = y;
          }
          return true;
        }
        queue.push_back(b);
      }
    }
    return false;
  }

  const MultiGraph& g_;
  VSet src_, snk_;
  std::vector<int> flow_;
  int value_ = 0;
};

void require_terminals(const MultiGraph& g) {
  if (popcount(g.steiner()) < 2) fail(Errc::NotEnoughTerminals, "need at least two terminals");
}

}  // namespace

FlowResult max_flow_mincut(const MultiGraph& g, VSet sources, VSet sinks) {
  UnitFlow f(g, sources, sinks);
  FlowResult r;
  r.value = f.run(INT_MAX);
  r.min_source_side = f.reachable_from_sources();
  r.max_source_side = g.all() & ~f.reaching_sinks();
  return r;
}

ResidualGraph max_flow_residual(const MultiGraph& g, VSet sources, VSet sinks) {
  UnitFlow f(g, sources, sinks);
  ResidualGraph r;
  r.value = f.run(INT_MAX);
  r.out = f.residual_arcs();
  return r;
}

int flow_value(const MultiGraph& g, VSet sources, VSet sinks, int limit) {
  UnitFlow f(g, sources, sinks);
  return f.run(limit);
}

SteinerMincut steiner_mincut(const MultiGraph& g) {
  require_terminals(g);
  int s0 = lowest(g.steiner());
  SteinerMincut best{INT_MAX, {}};
  for_each_vertex(g.steiner() & ~bit(s0), [&](int t) {
    FlowResult r = max_flow_mincut(g, bit(s0), bit(t));
    if (r.value < best.lambda) best = {r.value, make_cut(g, r.min_source_side)};
  });
  return best;
}

int steiner_lambda(const MultiGraph& g) {
  require_terminals(g);
  int s0 = lowest(g.steiner());
  int best = INT_MAX;
  for_each_vertex(g.steiner() & ~bit(s0), [&](int t) { best = std::min(best, flow_value(g, bit(s0), bit(t), best)); });
  return best;
}

int min_steiner_cut_separating(const MultiGraph& g, Vertex u, Vertex v, int limit) {
  if (u < 0 || u >= g.n() || v < 0 || v >= g.n()) fail(Errc::InvalidVertex, "vertex out of range");
  if (u == v) fail(Errc::SameVertex, fmt::format("vertex {}", u));
  require_terminals(g);
  int best = limit;
  for_each_vertex(g.steiner(), [&](int a) {
    if (a == v) return;
    for_each_vertex(g.steiner(), [&](int b) {
      if (b == a || b == u) return;
      best = std::min(best, flow_value(g, bit(u) | bit(a), bit(v) | bit(b), best));
    });
  });
  return best;
}

std::vector<Cut> steiner_cuts_upto(const MultiGraph& g, int cap_limit) {
  const int n = g.n();
  if (n > kEnumerationLimit) fail(Errc::TooLarge, fmt::format("enumeration needs n <= {}, got {}", kEnumerationLimit, n));
  std::vector<Cut> out;
  if (n < 2) return out;
  // Gray-code walk over sides that exclude vertex 0.
  std::vector<int> into(n, 0);  // edges from each vertex into the current side
  VSet side = 0;
  int cap = 0;
  const VSet terms = g.steiner();
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  for (std::uint64_t i = 1; i < count; ++i) {
    int v = std::countr_zero(i) + 1;
    const auto& w = g.weights(v);
    if (has(side, v)) {
      cap += 2 * into[v] - g.degree(v);
      side &= ~bit(v);
      for (int x = 0; x < n; ++x) into[x] -= w[x];
    } else {
      cap += g.degree(v) - 2 * into[v];
      side |= bit(v);
      for (int x = 0; x < n; ++x) into[x] += w[x];
    }
    if (cap <= cap_limit && (side & terms) && (terms & ~side)) out.push_back({side, cap, true});
  }
  return out;
}

CutFamily enumerate_cuts(const MultiGraph& g, int cap_limit) {
  require_terminals(g);
  auto all = steiner_cuts_upto(g, cap_limit);
  CutFamily fam;
  fam.lambda_S = steiner_lambda(g);
  for (const Cut& c : all) {
    if (c.capacity == fam.lambda_S) fam.mincuts.push_back(c);
    else if (c.capacity == fam.lambda_S + 1) fam.plus1cuts.push_back(c);
  }
  auto by_side = [](const Cut& a, const Cut& b) { return a.side < b.side; };
  std::sort(fam.mincuts.begin(), fam.mincuts.end(), by_side);
  std::sort(fam.plus1cuts.begin(), fam.plus1cuts.end(), by_side);
  return fam;
}

CutFamily cut_family(const MultiGraph& g) {
  require_terminals(g);
  return enumerate_cuts(g, steiner_lambda(g) + 1);
}

std::vector<VSet> connectivity_classes(const MultiGraph& g) {
  require_terminals(g);
  const int lambda = steiner_lambda(g);
  std::vector<VSet> classes;
  VSet left = g.all();
  while (left) {
    int u = lowest(left);
    VSet cls = bit(u);
    for_each_vertex(left & ~bit(u), [&](int v) {
      if (min_steiner_cut_separating(g, u, v, lambda + 1) > lambda) cls |= bit(v);
    });
    classes.push_back(cls);
    left &= ~cls;
  }
  return classes;
}

std::vector<VSet> classes_from_mincuts(int n, const std::vector<Cut>& mincuts) {
  std::map<std::vector<bool>, VSet> groups;
  std::vector<std::vector<bool>> sig(n, std::vector<bool>(mincuts.size()));
  for (size_t i = 0; i < mincuts.size(); ++i)
    for (int v = 0; v < n; ++v) sig[v][i] = has(mincuts[i].side, v);
  for (int v = 0; v < n; ++v) groups[sig[v]] |= bit(v);
  std::vector<VSet> classes;
  for (auto& [k, s] : groups) classes.push_back(s);
  std::sort(classes.begin(), classes.end(), [](VSet a, VSet b) { return lowest(a) < lowest(b); });
  return classes;
}

Cut tight_cut(const MultiGraph& g, VSet A) {
  require_terminals(g);
  A &= g.steiner();
  VSet rest = g.steiner() & ~A;
  if (A == 0 || rest == 0) fail(Errc::NotABunch, "terminal side must be a proper nonempty subset");
  FlowResult r = max_flow_mincut(g, A, rest);
  if (r.value != steiner_lambda(g)) fail(Errc::NotABunch, fmt::format("separating capacity {} exceeds lambda", r.value));
  return make_cut(g, r.min_source_side);
}

}  // namespace sck
