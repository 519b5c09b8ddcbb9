#include "sck/carcass.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "sck/pqdag.hpp"
#include "sck/reference.hpp"

namespace sck {

int TreeMask::highest() const {
  for (int i = kWords - 1; i >= 0; --i)
    if (w[i]) return i * 64 + 63 - std::countl_zero(w[i]);
  return -1;
}

int TreeMask::lowest_above(int i) const {
  int start = i + 1;
  for (int k = start >> 6; k < kWords; ++k) {
    std::uint64_t word = w[k];
    if (k == (start >> 6)) word &= ~std::uint64_t{0} << (start & 63);
    if (word) return k * 64 + std::countr_zero(word);
  }
  return -1;
}

namespace {

bool crosses(VSet x, VSet y) { return (x & y) && (x & ~y) && (y & ~x); }

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

ProperPath ordered(NodeId a, NodeId b) { return a <= b ? ProperPath{a, b} : ProperPath{b, a}; }

}  // namespace

// ---------------------------------------------------------------------------
// Construction

Carcass Carcass::build(const MultiGraph& g) {
  if (popcount(g.steiner()) < 2) fail(Errc::NotEnoughTerminals, "need at least two terminals");
  if (!g.connected()) fail(Errc::Disconnected, "carcass needs a connected graph");
  if (g.n() > kEnumerationLimit)
    fail(Errc::TooLargeForConstruction, fmt::format("construction enumerates cuts and needs n <= {}", kEnumerationLimit));

  Carcass c;
  c.g_ = g;
  const int n = g.n();
  const VSet S = g.steiner();
  c.lambda_ = steiner_lambda(g);
  c.s0_ = lowest(S);

  // Bunches keyed by their terminal side without s0, with both tight sides.
  const auto mincuts = steiner_cuts_upto(g, c.lambda_);
  std::map<VSet, std::pair<VSet, VSet>> tight;  // key -> (far tight side, near tight side)
  for (const Cut& m : mincuts) {
    VSet far = m.side;
    if (has(far & S, c.s0_)) far = g.all() & ~far;
    VSet key = far & S;
    auto [it, fresh] = tight.emplace(key, std::pair{far, g.all() & ~far});
    if (!fresh) {
      it->second.first &= far;
      it->second.second &= g.all() & ~far;
    }
  }
  std::vector<VSet> keys;
  for (auto& [k, v] : tight) keys.push_back(k);
  const int K = static_cast<int>(keys.size());

  // Laminar part and crossing components.
  UnionFind uf(K);
  std::vector<char> crossing(K, 0);
  for (int i = 0; i < K; ++i)
    for (int j = i + 1; j < K; ++j)
      if (crosses(keys[i], keys[j])) {
        uf.unite(i, j);
        crossing[i] = crossing[j] = 1;
      }
  std::vector<VSet> laminar;
  std::map<int, std::vector<VSet>> comps;
  for (int i = 0; i < K; ++i) {
    if (crossing[i]) comps[uf.find(i)].push_back(keys[i]);
    else laminar.push_back(keys[i]);
  }
  std::set<VSet> laminar_set(laminar.begin(), laminar.end());

  struct CycleDraft {
    VSet top;                // union of the atoms away from s0
    std::vector<VSet> atoms; // atoms[0] holds s0
  };
  std::vector<CycleDraft> drafts;
  for (auto& [root_id, kc] : comps) {
    std::map<std::vector<bool>, VSet> by_sig;
    for_each_vertex(S, [&](int t) {
      std::vector<bool> sig(kc.size());
      for (size_t i = 0; i < kc.size(); ++i) sig[i] = has(kc[i], t);
      by_sig[sig] |= bit(t);
    });
    std::vector<VSet> atoms;
    VSet a0 = 0;
    for (auto& [sig, set] : by_sig) {
      if (has(set, c.s0_)) a0 = set;
      else atoms.push_back(set);
    }
    const int k = static_cast<int>(atoms.size()) + 1;
    require(k >= 4, "crossing component with fewer than four atoms");
    std::set<VSet> kset(kc.begin(), kc.end());
    // Consecutive atoms are those whose union is a crossing key.
    std::vector<std::vector<int>> nb(atoms.size());
    for (size_t i = 0; i < atoms.size(); ++i)
      for (size_t j = i + 1; j < atoms.size(); ++j)
        if (kset.count(atoms[i] | atoms[j])) {
          nb[i].push_back(static_cast<int>(j));
          nb[j].push_back(static_cast<int>(i));
        }
    int start = -1;
    for (size_t i = 0; i < atoms.size(); ++i) {
      require(nb[i].size() == 1 || nb[i].size() == 2, "crossing atoms do not form a path");
      if (nb[i].size() == 1 && (start < 0 || lowest(atoms[i]) < lowest(atoms[start]))) start = static_cast<int>(i);
    }
    require(start >= 0, "crossing atoms form no path");
    CycleDraft d;
    d.atoms.push_back(a0);
    for (int prev = -1, cur = start; cur >= 0;) {
      d.atoms.push_back(atoms[cur]);
      int next = -1;
      for (int x : nb[cur])
        if (x != prev) next = x;
      prev = cur;
      cur = next;
    }
    require(static_cast<int>(d.atoms.size()) == k, "crossing atoms do not form a single path");
    // Crossing keys are exactly the arcs of length 2..k-2 avoiding s0.
    size_t arcs = 0;
    for (int i = 1; i < k; ++i) {
      VSet arc = d.atoms[i];
      require(laminar_set.count(arc) > 0, "cycle atom is not a laminar bunch");
      for (int j = i + 1; j < k; ++j) {
        arc |= d.atoms[j];
        int len = j - i + 1;
        if (len <= k - 2) {
          require(kset.count(arc) > 0, "missing crossing arc");
          ++arcs;
        }
      }
    }
    require(arcs == kc.size(), "crossing component has keys that are not arcs");
    d.top = S & ~a0;
    require(laminar_set.count(d.top) > 0, "cycle union is not a laminar bunch");
    drafts.push_back(std::move(d));
  }

  // Node ids: root, laminar sets by decreasing size, then cycle nodes. A
  // cycle union is the empty node at the top of its cycle.
  std::sort(laminar.begin(), laminar.end(), [](VSet a, VSet b) {
    return popcount(a) != popcount(b) ? popcount(a) > popcount(b) : a < b;
  });
  std::set<VSet> tops;
  for (const auto& d : drafts) tops.insert(d.top);
  const std::vector<VSet>& plain = laminar;
  std::map<VSet, NodeId> node_of;
  for (size_t i = 0; i < plain.size(); ++i) node_of[plain[i]] = static_cast<NodeId>(i + 1);
  int next_node = static_cast<int>(plain.size()) + 1;
  std::map<VSet, std::pair<int, int>> atom_slot;  // atom -> (cycle, position)
  for (size_t ci = 0; ci < drafts.size(); ++ci) {
    SkeletonCycle cy;
    cy.nodes.push_back(-1);
    for (size_t i = 1; i < drafts[ci].atoms.size(); ++i) {
      cy.nodes.push_back(next_node++);
      auto [it, fresh] = atom_slot.emplace(drafts[ci].atoms[i], std::pair{static_cast<int>(ci), static_cast<int>(i)});
      require(fresh, "atom shared by two cycles");
    }
    c.cycles_.push_back(std::move(cy));
  }
  const int N = next_node;
  c.node_count_ = N;
  const int H = static_cast<int>(c.cycles_.size());
  if (N + H > kMaxTreeNodes) fail(Errc::TooLargeForConstruction, "skeleton too large for the block tree masks");

  // Node a laminar set hangs from: its cycle node if it is an atom, else the
  // node of its least strict superset, else the root.
  auto attach = [&](VSet x) -> NodeId {
    auto slot = atom_slot.find(x);
    if (slot != atom_slot.end()) return c.cycles_[slot->second.first].nodes[slot->second.second];
    VSet best = 0;
    for (VSet y : laminar)
      if (y != x && (x & ~y) == 0 && (best == 0 || popcount(y) < popcount(best))) best = y;
    if (best == 0) return 0;
    require(!tops.count(best), "laminar set below a cycle union is not inside an atom");
    return node_of.at(best);
  };
  for (size_t ci = 0; ci < drafts.size(); ++ci) c.cycles_[ci].nodes[0] = node_of.at(drafts[ci].top);
  std::vector<NodeId> sk_parent(N, -1);
  for (VSet x : plain) sk_parent[node_of.at(x)] = attach(x);

  // Edges: tree edges by child id, then cycle edges.
  c.adj_.assign(N, {});
  c.up_edge_.assign(N, -1);
  for (NodeId x = 1; x <= static_cast<NodeId>(plain.size()); ++x) {
    int id = static_cast<int>(c.edges_.size());
    c.edges_.push_back({x, sk_parent[x], -1, -1});
    c.up_edge_[x] = id;
    c.adj_[x].push_back(id);
    c.adj_[sk_parent[x]].push_back(id);
  }
  c.tree_edges_ = static_cast<int>(c.edges_.size());
  c.cycle_of_.assign(N, -1);
  c.cycle_pos_.assign(N, -1);
  c.is_top_.assign(N, 0);
  c.below_.assign(N, -1);
  for (NodeId x = 1; x <= static_cast<NodeId>(plain.size()); ++x) c.below_[sk_parent[x]] = x;
  for (int ci = 0; ci < H; ++ci) {
    auto& cy = c.cycles_[ci];
    const int k = static_cast<int>(cy.nodes.size());
    c.is_top_[cy.nodes[0]] = 1;
    for (int i = 1; i < k; ++i) {
      c.cycle_of_[cy.nodes[i]] = ci;
      c.cycle_pos_[cy.nodes[i]] = i;
    }
    for (int i = 0; i < k; ++i) {
      int id = static_cast<int>(c.edges_.size());
      NodeId a = cy.nodes[i], b = cy.nodes[(i + 1) % k];
      c.edges_.push_back({a, b, ci, i});
      cy.edges.push_back(id);
      c.adj_[a].push_back(id);
      c.adj_[b].push_back(id);
    }
    cy.hub = N + ci;
  }

  // Terminal locations.
  c.term_loc_.assign(n, -1);
  c.node_terms_.assign(N, 0);
  for_each_vertex(S, [&](int t) {
    VSet best = 0;
    for (VSet y : plain)
      if (has(y, t) && (best == 0 || popcount(y) < popcount(best))) best = y;
    NodeId x = best ? node_of.at(best) : 0;
    c.term_loc_[t] = x;
    c.node_terms_[x] |= bit(t);
  });

  // Block tree: hubs replace cycles; children in id order, cycle nodes in
  // cycle order.
  const int T = N + H;
  c.parent_.assign(T, -1);
  std::vector<std::vector<int>> kids(T);
  for (NodeId x = 1; x < N; ++x) {
    if (c.cycle_of_[x] >= 0) c.parent_[x] = c.cycles_[c.cycle_of_[x]].hub;
    else c.parent_[x] = sk_parent[x];
  }
  for (int ci = 0; ci < H; ++ci) c.parent_[N + ci] = c.cycles_[ci].nodes[0];
  for (int x = 1; x < T; ++x)
    if (!(x < N && c.cycle_of_[x] >= 0)) kids[c.parent_[x]].push_back(x);
  for (int ci = 0; ci < H; ++ci)
    for (size_t i = 1; i < c.cycles_[ci].nodes.size(); ++i) kids[N + ci].push_back(c.cycles_[ci].nodes[i]);
  c.depth_.assign(T, 0);
  c.pre_.assign(T, 0);
  c.post_.assign(T, 0);
  c.at_pre_.assign(T, 0);
  c.hubs_.assign(T, 0);
  c.tedges_.assign(T, 0);
  c.anc_.assign(T, TreeMask{});
  {
    int clock = 0;
    std::vector<std::pair<int, size_t>> stack{{0, 0}};
    c.pre_[0] = clock;
    c.at_pre_[clock++] = 0;
    c.anc_[0].set(0);
    c.hubs_[0] = 0;
    while (!stack.empty()) {
      auto& [x, i] = stack.back();
      if (i < kids[x].size()) {
        int y = kids[x][i++];
        c.depth_[y] = c.depth_[x] + 1;
        c.pre_[y] = clock;
        c.at_pre_[clock++] = y;
        c.anc_[y] = c.anc_[x];
        c.anc_[y].set(c.pre_[y]);
        c.hubs_[y] = c.hubs_[x] + (y >= N ? 1 : 0);
        c.tedges_[y] = c.tedges_[x] + (y < N && x < N ? 1 : 0);
        stack.push_back({y, 0});
      } else {
        c.post_[x] = clock;
        stack.pop_back();
      }
    }
    require(clock == T, "block tree is not connected");
  }

  // Skeleton minimal cuts realise exactly the bunches; the tree edge below a
  // cycle node and the cycle pair around it realise the same one.
  {
    auto cuts = c.minimal_cuts();
    std::set<VSet> seen;
    for (const MinimalCut& k : cuts) {
      VSet side = c.terminal_side(k);
      require(tight.count(side) > 0, "skeleton minimal cut without a bunch");
      seen.insert(side);
    }
    require(seen.size() == tight.size(), "bunch missing from the skeleton");
  }

  // Units and projections.
  auto classes = classes_from_mincuts(n, mincuts);
  c.phi_.assign(n, -1);
  c.node_unit_.assign(N, -1);
  const auto cuts = c.minimal_cuts();
  for (size_t ui = 0; ui < classes.size(); ++ui) {
    Unit u;
    u.members = classes[ui];
    u.steiner = (u.members & S) != 0;
    for_each_vertex(u.members, [&](int v) { c.phi_[v] = static_cast<UnitId>(ui); });
    std::vector<Side> st(cuts.size());
    for (size_t i = 0; i < cuts.size(); ++i) {
      const auto& [tf, tn] = tight.at(c.terminal_side(cuts[i]));
      if ((u.members & ~tf) == 0) st[i] = Side::Far;
      else if ((u.members & ~tn) == 0) st[i] = Side::Near;
      else {
        require((u.members & (tf | tn)) == 0, "class split by a tight cut");
        st[i] = Side::Stretched;
      }
    }
    std::vector<NodeId> nodes;
    for (NodeId x = 0; x < N; ++x) {
      bool ok = true;
      for (size_t i = 0; i < cuts.size() && ok; ++i)
        if (st[i] != Side::Stretched) ok = c.far(x, cuts[i]) == (st[i] == Side::Far);
      if (ok) nodes.push_back(x);
    }
    require(!nodes.empty(), "unit with no consistent skeleton node");
    if (nodes.size() == 1) {
      u.path = {nodes[0], nodes[0]};
    } else {
      std::set<NodeId> in(nodes.begin(), nodes.end());
      std::vector<NodeId> ends;
      for (NodeId x : nodes) {
        int deg = 0;
        for (int e : c.adj_[x]) {
          NodeId y = c.edges_[e].u == x ? c.edges_[e].v : c.edges_[e].u;
          deg += in.count(y) ? 1 : 0;
        }
        if (deg == 1) ends.push_back(x);
      }
      if (ends.size() != 2) fail(Errc::NotAProperPath, fmt::format("unit {} does not project to a path", ui));
      u.path = ordered(ends[0], ends[1]);
      // The block tree path must visit exactly these nodes.
      std::set<NodeId> walk;
      int l = c.lca(u.path.a, u.path.b);
      for (int x : {u.path.a, u.path.b})
        for (int y = x; ; y = c.parent_[y]) {
          if (y < N) walk.insert(y);
          if (y == l) break;
        }
      if (walk != in || !c.is_proper_path(u.path))
        fail(Errc::NotAProperPath, fmt::format("unit {} projection is not a proper path", ui));
    }
    u.stretched = u.path.a != u.path.b;
    for (size_t i = 0; i < cuts.size(); ++i)
      if (c.side_of(u.path, cuts[i]) != st[i]) fail(Errc::Internal, fmt::format("projection of unit {} ({},{}) disagrees with cut ({},{}): {} vs {}", ui, u.path.a, u.path.b, cuts[i].e1, cuts[i].e2, int(c.side_of(u.path, cuts[i])), int(st[i])));
    if (!u.stretched) {
      NodeId x = u.path.a;
      require(c.node_unit_[x] < 0, "two units at one skeleton node");
      require(!c.on_cycle(x), "unit located at a cycle node");
      c.node_unit_[x] = static_cast<UnitId>(ui);
      require((u.members & S) == c.node_terms_[x], "unit terminals differ from its node's terminals");
    } else {
      require(!u.steiner, "stretched unit holds a terminal");
    }
    c.units_.push_back(u);
  }
  for (NodeId x = 0; x < N; ++x)
    require(c.node_terms_[x] == 0 || c.node_unit_[x] >= 0, "terminal node without a unit");

  // Edge projections: the union of both unit paths must be a proper path
  // consistent with every bunch that fixes both ends on one side.
  for (const Edge& e : g.edges()) {
    UnitId a = c.phi_[e.u], b = c.phi_[e.v];
    if (a == b) continue;
    ProperPath p = c.pair_projection(a, b);
    require(c.is_proper_path(p), "edge projection is not proper");
    for (const MinimalCut& k : cuts) {
      Side sa = c.side_of(c.units_[a].path, k), sb = c.side_of(c.units_[b].path, k);
      Side se = c.side_of(p, k);
      if (sa != Side::Stretched && sa == sb) require(se == sa, "edge projection leaves its side");
      else require(se == Side::Stretched, "edge projection misses a crossing bunch");
    }
  }

  // Orders for units sharing one projection.
  c.group_of_.assign(c.units_.size(), -1);
  std::map<std::pair<NodeId, NodeId>, int> group_index;
  for (UnitId u = 0; u < c.unit_count(); ++u) {
    if (!c.units_[u].stretched) continue;
    auto key = std::pair{c.units_[u].path.a, c.units_[u].path.b};
    auto [it, fresh] = group_index.emplace(key, static_cast<int>(c.tau_.size()));
    if (fresh) {
      TauGroup tg;
      tg.path = c.units_[u].path;
      auto pe = c.path_edges(tg.path);
      tg.edge = *std::min_element(pe.begin(), pe.end());
      tg.cut = c.cut_of_edge(tg.edge);
      tg.far_is_source = c.far(tg.path.a, tg.cut);
      const auto& [tf, tn] = tight.at(c.terminal_side(tg.cut));
      VSet src = tg.far_is_source ? tf : tn, snk = tg.far_is_source ? tn : tf;
      PQDag d = build_pq_dag(g, src, snk);
      for (UnitId r = 0; r < c.unit_count(); ++r) {
        if (c.side_of(c.units_[r].path, tg.cut) != Side::Stretched) continue;
        int comp = d.comp_of[lowest(c.units_[r].members)];
        for_each_vertex(c.units_[r].members, [&](int v) { require(d.comp_of[v] == comp, "unit split by the residual"); });
        tg.positions.push_back({r, d.position[comp]});
      }
      c.tau_.push_back(std::move(tg));
    }
    c.group_of_[u] = it->second;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Block tree helpers

int Carcass::parent(int x) const {
  probes::add();
  return parent_[x];
}
int Carcass::depth(int x) const {
  probes::add();
  return depth_[x];
}
int Carcass::pre(int x) const {
  probes::add();
  return pre_[x];
}
int Carcass::post(int x) const {
  probes::add();
  return post_[x];
}
bool Carcass::is_ancestor(int x, int y) const {
  probes::add();
  return pre_[x] <= pre_[y] && pre_[y] < post_[x];
}
int Carcass::lca(int x, int y) const {
  probes::add();
  return at_pre_[(anc_[x] & anc_[y]).highest()];
}
bool Carcass::on_path(int x, int a, int b) const {
  int l = lca(a, b);
  return is_ancestor(l, x) && (is_ancestor(x, a) || is_ancestor(x, b));
}
int Carcass::child_toward(int x, int y) const {
  probes::add();
  int p = anc_[y].lowest_above(pre_[x]);
  require(p >= 0 && parent_[at_pre_[p]] == x, "child_toward needs a proper ancestor");
  return at_pre_[p];
}
int Carcass::neighbor_toward(int x, int y) const {
  return is_ancestor(x, y) ? child_toward(x, y) : parent(x);
}
int Carcass::distance(int a, int b) const {
  int l = lca(a, b);
  return depth(a) + depth(b) - 2 * depth(l);
}
int Carcass::hubs_above(int x) const {
  probes::add();
  return hubs_[x];
}
int Carcass::tree_edges_above(int x) const {
  probes::add();
  return tedges_[x];
}
int Carcass::cycle_position(int h, NodeId y) const {
  probes::add();
  const auto& cy = cycles_[hub_cycle(h)];
  if (y == cy.nodes[0]) return 0;
  require(cycle_of_[y] == hub_cycle(h), "node is not on this cycle");
  return cycle_pos_[y];
}
int Carcass::cycle_edge_between(int h, NodeId y1, NodeId y2) const {
  const auto& cy = cycles_[hub_cycle(h)];
  const int k = static_cast<int>(cy.nodes.size());
  int p = cycle_position(h, y1), q = cycle_position(h, y2);
  if (p > q) std::swap(p, q);
  if (q == p + 1) return cy.edges[p];
  if (p == 0 && q == k - 1) return cy.edges[k - 1];
  return -1;
}

NodeId Carcass::terminal_location(Vertex t) const {
  if (t < 0 || t >= g_.n() || !has(g_.steiner(), t)) fail(Errc::InvalidVertex, "not a terminal");
  return term_loc_[t];
}

int Carcass::stretched_count() const {
  return static_cast<int>(std::count_if(units_.begin(), units_.end(), [](const Unit& u) { return u.stretched; }));
}
int Carcass::steiner_unit_count() const {
  return static_cast<int>(std::count_if(units_.begin(), units_.end(), [](const Unit& u) { return u.steiner; }));
}

// ---------------------------------------------------------------------------
// Minimal cuts

std::vector<MinimalCut> Carcass::minimal_cuts() const {
  std::vector<MinimalCut> out;
  for (int e = 0; e < tree_edges_; ++e) out.push_back({e, -1});
  // Pairs around a single cycle node repeat a tree edge and are skipped.
  for (const auto& cy : cycles_) {
    const size_t k = cy.edges.size();
    for (size_t i = 0; i < k; ++i)
      for (size_t j = i + 2; j < k; ++j)
        if (!(i == 0 && j == k - 1)) out.push_back({cy.edges[i], cy.edges[j]});
  }
  return out;
}

void Carcass::validate_cut(MinimalCut k) const {
  const int m = static_cast<int>(edges_.size());
  if (k.e1 < 0 || k.e1 >= m) fail(Errc::InvalidMinimalCut, "unknown skeleton edge");
  if (k.is_tree()) {
    if (edges_[k.e1].cycle >= 0) fail(Errc::InvalidMinimalCut, "a single cycle edge is not a minimal cut");
    return;
  }
  if (k.e2 >= m || k.e2 <= k.e1) fail(Errc::InvalidMinimalCut, "cycle pair must be two distinct edges in order");
  if (edges_[k.e1].cycle < 0 || edges_[k.e1].cycle != edges_[k.e2].cycle)
    fail(Errc::InvalidMinimalCut, "cycle pair edges must lie on one cycle");
}

std::pair<int, int> Carcass::far_interval(MinimalCut k) const {
  probes::add();
  if (k.is_tree()) {
    NodeId x = edges_[k.e1].u;
    return {pre_[x], post_[x]};
  }
  const auto& cy = cycles_[edges_[k.e1].cycle];
  const int len = static_cast<int>(cy.nodes.size());
  int i = edges_[k.e1].pos, j = edges_[k.e2].pos;
  // A pair around one cycle node is the bunch of that node's tree edge.
  if (i == 0 && j == len - 1) return {pre_[cy.nodes[0]], post_[cy.nodes[0]]};
  if (j == i + 1) {
    NodeId x = below_[cy.nodes[j]];
    return {pre_[x], post_[x]};
  }
  return {pre_[cy.nodes[i + 1]], post_[cy.nodes[j]]};
}

bool Carcass::far(int x, MinimalCut k) const {
  auto [lo, hi] = far_interval(k);
  probes::add();
  return lo <= pre_[x] && pre_[x] < hi;
}

Side Carcass::side_of(ProperPath p, MinimalCut k) const {
  bool fa = far(p.a, k), fb = far(p.b, k);
  if (fa != fb) return Side::Stretched;
  return fa ? Side::Far : Side::Near;
}

VSet Carcass::terminal_side(MinimalCut k) const {
  VSet out = 0;
  for_each_vertex(g_.steiner(), [&](int t) {
    if (far(term_loc_[t], k)) out |= bit(t);
  });
  return out;
}

MinimalCut Carcass::cut_of_edge(int e) const {
  const auto& se = edges_[e];
  if (se.cycle < 0) return {e, -1};
  const auto& cy = cycles_[se.cycle];
  int f = cy.edges[(se.pos + 1) % cy.edges.size()];
  return {std::min(e, f), std::max(e, f)};
}

MinimalCut Carcass::isolate_arc(int ci, int p, int q) const {
  // Arc of positions p, p+1, ..., q (cyclic).
  const auto& cy = cycles_[ci];
  const int k = static_cast<int>(cy.nodes.size());
  int e = cy.edges[(p + k - 1) % k], f = cy.edges[q];
  return {std::min(e, f), std::max(e, f)};
}

// ---------------------------------------------------------------------------
// Paths

bool Carcass::is_proper_path(ProperPath p) const {
  if (p.a < 0 || p.b < 0 || p.a >= node_count_ || p.b >= node_count_) return false;
  int l = lca(p.a, p.b);
  if (is_hub(l)) {
    NodeId y1 = child_toward(l, p.a), y2 = child_toward(l, p.b);
    if (cycle_edge_between(l, y1, y2) < 0) return false;
  }
  for (int x : {p.a, p.b})
    for (int y = x; y != l; y = parent_[y]) {
      int h = parent_[y];
      if (h != l && is_hub(h) && cycle_edge_between(h, y, parent_[h]) < 0) return false;
    }
  return true;
}

std::vector<int> Carcass::path_edges(ProperPath p) const {
  std::vector<int> out;
  int l = lca(p.a, p.b);
  for (int x : {p.a, p.b})
    for (int y = x; y != l; y = parent_[y]) {
      int h = parent_[y];
      if (!is_hub(y) && !is_hub(h)) out.push_back(up_edge_[y]);
      else if (is_hub(h) && h != l) out.push_back(cycle_edge_between(h, y, parent_[h]));
    }
  if (is_hub(l)) out.push_back(cycle_edge_between(l, child_toward(l, p.a), child_toward(l, p.b)));
  std::sort(out.begin(), out.end());
  return out;
}

ProperPath Carcass::pair_projection(UnitId a, UnitId b) const {
  const ProperPath pa = units_[a].path, pb = units_[b].path;
  for (NodeId x : {pa.a, pa.b})
    for (NodeId y : {pb.a, pb.b}) {
      NodeId xo = x == pa.a ? pa.b : pa.a, yo = y == pb.a ? pb.b : pb.a;
      if (on_path(xo, x, y) && on_path(yo, x, y)) return ordered(x, y);
    }
  fail(Errc::NotAProperPath, "unit paths do not combine into one path");
}

ProperPath Carcass::edge_projection(EdgeId id) const {
  if (!g_.has_edge_id(id)) fail(Errc::UnknownEdge, fmt::format("edge {}", id));
  const Edge& e = g_.edge_by_id(id);
  if (phi_[e.u] == phi_[e.v]) fail(Errc::IntraUnitEdge, fmt::format("edge {} lies inside one class", id));
  return pair_projection(phi_[e.u], phi_[e.v]);
}

PathIntersection Carcass::path_intersection(ProperPath p1, ProperPath p2) const {
  if (!is_proper_path(p1) || !is_proper_path(p2)) fail(Errc::NotAProperPath, "path_intersection needs proper paths");
  return intersect(p1, p2);
}

PathIntersection Carcass::intersect(ProperPath p1, ProperPath p2) const {
  PathIntersection r;
  const int a = p1.a, b = p1.b, c = p2.a, d = p2.b;
  const int l1 = lca(a, b), l2 = lca(c, d);
  if (!on_path(l1, c, d) && !on_path(l2, a, b)) return r;
  std::array<int, 4> q{lca(a, c), lca(a, d), lca(b, c), lca(b, d)};
  std::sort(q.begin(), q.end(), [&](int x, int y) { return depth(x) > depth(y); });
  int q1 = q[0], q2 = q[1];
  r.q1 = q1;
  r.q2 = q2;
  for (int h : {q1, q2}) {
    if (!is_hub(h)) continue;
    // Both paths pass through h and leave it along different cycle edges.
    auto edge_at = [&](int x, int y) {
      return cycle_edge_between(h, neighbor_toward(h, x), neighbor_toward(h, y));
    };
    r.kind = IntersectionKind::SharedCyclePair;
    r.edge = edge_at(a, b);
    r.edge2 = edge_at(c, d);
    return r;
  }
  if (q1 == q2) {
    r.kind = IntersectionKind::SingleNode;
    r.node = q1;
    return r;
  }
  // x is the endpoint of the common part that is not an ancestor of the other.
  int x = is_ancestor(q1, q2) ? q2 : q1, other = x == q1 ? q2 : q1;
  int px = parent(x);
  r.kind = IntersectionKind::SharedEdge;
  if (!is_hub(px)) {
    probes::add();
    r.edge = up_edge_[x];
  } else {
    r.edge = cycle_edge_between(px, x, neighbor_toward(px, other));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Cut reporting

VSet Carcass::tight_side(MinimalCut k, bool far_side) const {
  auto [lo, hi] = far_interval(k);
  auto is_far = [&](NodeId x) { return lo <= pre_[x] && pre_[x] < hi; };
  VSet out = 0;
  for (Vertex v = 0; v < g_.n(); ++v) {
    const ProperPath& p = units_[phi_[v]].path;
    bool fa = is_far(p.a), fb = is_far(p.b);
    if (fa == fb && fa == far_side) out |= bit(v);
  }
  return out;
}

Cut Carcass::report_tight_cut(NodeId node, MinimalCut k) const {
  validate_cut(k);
  if (node < 0 || node >= node_count_) fail(Errc::InvalidMinimalCut, "unknown skeleton node");
  return make_cut(g_, tight_side(k, far(node, k)));
}

std::optional<std::pair<MinimalCut, bool>> Carcass::fixed_split(UnitId x, UnitId y) const {
  const ProperPath px = units_[x].path, py = units_[y].path;
  auto check = [&](MinimalCut k) -> std::optional<std::pair<MinimalCut, bool>> {
    Side sx = side_of(px, k);
    if (sx == Side::Stretched || side_of(py, k) == sx) return std::nullopt;
    return std::pair{k, sx == Side::Far};
  };
  for (int e = 0; e < tree_edges_; ++e)
    if (auto r = check({e, -1})) return r;
  for (size_t ci = 0; ci < cycles_.size(); ++ci) {
    const int h = cycles_[ci].hub;
    int p, q;
    if (on_path(h, px.a, px.b)) {
      p = cycle_position(h, neighbor_toward(h, px.a));
      q = cycle_position(h, neighbor_toward(h, px.b));
      const int k = static_cast<int>(cycles_[ci].nodes.size());
      if ((p + 1) % k != q) std::swap(p, q);
    } else {
      NodeId at = is_ancestor(h, px.a) ? child_toward(h, px.a) : cycles_[ci].nodes[0];
      p = q = cycle_position(h, at);
    }
    if (auto r = check(isolate_arc(static_cast<int>(ci), p, q))) return r;
  }
  return std::nullopt;
}

std::optional<Cut> Carcass::report_separating_mincut(Vertex u, Vertex v) const {
  if (u < 0 || v < 0 || u >= g_.n() || v >= g_.n()) fail(Errc::InvalidVertex, "vertex out of range");
  if (u == v) fail(Errc::SameVertex, fmt::format("vertex {}", u));
  UnitId mu = phi_[u], nu = phi_[v];
  if (mu == nu) return std::nullopt;
  if (!(units_[mu].path == units_[nu].path)) {
    auto split = fixed_split(nu, mu);
    if (!split) split = fixed_split(mu, nu);
    require(split.has_value(), "units with different projections are not split by any bunch");
    return make_cut(g_, tight_side(split->first, split->second));
  }
  const TauGroup& tg = tau_[group_of_[mu]];
  int pm = -1, pn = -1;
  for (auto [r, pos] : tg.positions) {
    if (r == mu) pm = pos;
    if (r == nu) pn = pos;
  }
  require(pm >= 0 && pn >= 0 && pm != pn, "units of one group share a residual component");
  const int cut_pos = std::min(pm, pn);
  VSet side = tight_side(tg.cut, tg.far_is_source);
  for (auto [r, pos] : tg.positions)
    if (pos <= cut_pos) side |= units_[r].members;
  return make_cut(g_, side);
}

std::size_t Carcass::stored_entries() const {
  // Units (members word, flags, two path ends), the quotient map, skeleton
  // records, block tree arrays with their ancestor masks, and tau groups.
  std::size_t total = units_.size() * 4 + phi_.size();
  total += node_terms_.size() * 3 + edges_.size() * 4;
  for (const auto& cy : cycles_) total += cy.nodes.size() * 2 + 1;
  const std::size_t words = (parent_.size() + 63) / 64;
  total += parent_.size() * (7 + words);
  for (const auto& tg : tau_) total += 6 + tg.positions.size() * 2;
  return total;
}

}  // namespace sck
