#include "sck/dual.hpp"

#include <algorithm>
#include <array>

#include <fmt/format.h>

#include "sck/reference.hpp"

namespace sck {

const char* failure_case_name(FailureCase c) {
  switch (c) {
    case FailureCase::SameClass: return "case1";
    case FailureCase::SeparateClasses: return "case2";
    case FailureCase::OneCrossing: return "case3";
    case FailureCase::BothCrossing: return "case4";
  }
  return "?";
}

const char* insertion_shape_name(InsertionShape s) {
  switch (s) {
    case InsertionShape::Suppressive: return "suppressive";
    case InsertionShape::FourCycleOrJunction: return "one_4cycle_or_junction";
    case InsertionShape::TwoThreeJunctions: return "two_3junctions";
    case InsertionShape::OneThreeJunction: return "one_3junction";
    case InsertionShape::Path: return "path";
  }
  return "?";
}

namespace {

Side vertex_side(const Carcass& c, Vertex v, MinimalCut k) {
  probes::add();
  return c.side_of(c.projection(c.phi(v)), k);
}

bool uses_edge(const Carcass& c, ProperPath p, int e) {
  const SkeletonEdge& se = c.edges()[e];
  return c.on_path(se.u, p.a, p.b) && c.on_path(se.v, p.a, p.b);
}

// First skeleton edge on the path from node x to node y.
int edge_toward(const Carcass& c, NodeId x, NodeId y) {
  int w = c.neighbor_toward(x, y);
  if (c.is_hub(w)) return c.cycle_edge_between(w, x, c.neighbor_toward(w, y));
  return c.parent(w) == x ? c.up_edge(w) : c.up_edge(x);
}

struct Pinned {
  Vertex v;
  Side s;
};

// Some mincut of bunch k holds every `in` vertex on the near side and every
// `out` vertex on the far side.
bool placeable(const Carcass& c, const NearestMincutMatrix& m, MinimalCut k, const std::vector<Pinned>& in,
               const std::vector<Pinned>& out) {
  for (const Pinned& p : in)
    if (p.s == Side::Far) return false;
  for (const Pinned& q : out)
    if (q.s == Side::Near) return false;
  for (const Pinned& p : in) {
    if (p.s != Side::Stretched) continue;
    for (const Pinned& q : out)
      if (q.s == Side::Stretched && m.member(c, c.phi(p.v), c.phi(q.v), k, false)) return false;
  }
  return true;
}

// Least near side of a mincut of k holding every `in` vertex.
VSet near_side(const Carcass& c, const NearestMincutMatrix& m, MinimalCut k, const std::vector<Pinned>& in) {
  VSet side = 0;
  for (Vertex w = 0; w < c.graph().n(); ++w) {
    Side s = c.side_of(c.projection(c.phi(w)), k);
    if (s == Side::Near) {
      side |= bit(w);
    } else if (s == Side::Stretched) {
      for (const Pinned& p : in)
        if (p.s == Side::Stretched && m.member(c, c.phi(p.v), c.phi(w), k, false)) {
          side |= bit(w);
          break;
        }
    }
  }
  return side;
}

void add_unique(std::vector<MinimalCut>& v, MinimalCut k) {
  if (std::find(v.begin(), v.end(), k) == v.end()) v.push_back(k);
}

void add_unique(std::vector<NodeId>& v, NodeId x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

// A (lambda+1) cut holding some vertex of cand (and a terminal) and none of
// sinks, if any. Any Steiner cut of this shape is at least cap.
std::optional<VSet> find_separation(const MultiGraph& g, int cap, VSet cand, VSet sinks) {
  for (Vertex a : members(cand & ~sinks)) {
    FlowResult r = max_flow_mincut(g, bit(a), sinks);
    if (r.value > cap) continue;
    if (r.min_source_side & g.steiner()) return r.min_source_side;
    for (Vertex t : members(g.steiner() & ~sinks)) {
      FlowResult rt = max_flow_mincut(g, bit(a) | bit(t), sinks);
      if (rt.value <= cap) return rt.min_source_side;
    }
  }
  return std::nullopt;
}

std::size_t tri_index(int i, int j, int n) {
  if (i > j) std::swap(i, j);
  return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i - 1) / 2 + (j - i);
}

int rank_in(VSet s, Vertex v) { return popcount(s & (bit(v) - 1)); }

}  // namespace

// ---------------------------------------------------------------------------
// NearestMincutMatrix

NearestMincutMatrix NearestMincutMatrix::build(const Carcass& c) {
  NearestMincutMatrix m;
  m.index_.assign(c.unit_count(), -1);
  std::vector<UnitId> st;
  for (UnitId u = 0; u < c.unit_count(); ++u)
    if (c.unit(u).stretched) {
      m.index_[u] = static_cast<int>(st.size());
      st.push_back(u);
    }
  m.count_ = static_cast<int>(st.size());
  m.bits_.assign(static_cast<std::size_t>(m.count_) * m.count_, -1);
  std::vector<std::vector<int>> pe;
  for (UnitId u : st) pe.push_back(c.path_edges(c.projection(u)));
  const MultiGraph& g = c.graph();
  for (int i = 0; i < m.count_; ++i)
    for (int j = 0; j < m.count_; ++j) {
      if (i == j) continue;
      std::vector<int> shared;
      std::set_intersection(pe[i].begin(), pe[i].end(), pe[j].begin(), pe[j].end(), std::back_inserter(shared));
      if (shared.empty()) continue;
      const MinimalCut k = c.cut_of_edge(shared.front());
      const ProperPath p = c.projection(st[i]);
      int bits = 0;
      for (int end = 0; end < 2; ++end) {
        const bool fs = c.far(end == 0 ? p.a : p.b, k);
        FlowResult r = max_flow_mincut(g, c.tight_side(k, fs) | c.unit(st[i]).members, c.tight_side(k, !fs));
        require(r.value == c.lambda(), "stretched unit has no mincut on one side of its bunch");
        if (has(r.min_source_side, lowest(c.unit(st[j]).members))) bits |= 1 << end;
      }
      m.bits_[static_cast<std::size_t>(i) * m.count_ + j] = static_cast<signed char>(bits);
      ++m.stored_;
    }
  return m;
}

std::optional<int> NearestMincutMatrix::entry(UnitId v, UnitId w) const {
  if (v < 0 || w < 0 || v >= static_cast<int>(index_.size()) || w >= static_cast<int>(index_.size()))
    fail(Errc::BadIndex, "unit out of range");
  int iv = index_[v], iw = index_[w];
  if (iv < 0 || iw < 0) return std::nullopt;
  int b = bits_[static_cast<std::size_t>(iv) * count_ + iw];
  if (b < 0) return std::nullopt;
  return b;
}

bool NearestMincutMatrix::member(const Carcass& c, UnitId v, UnitId w, MinimalCut k, bool far_side) const {
  if (v == w) return true;
  const ProperPath pv = c.projection(v);
  if (!k.is_tree()) {
    // Units leaving an arc through different cycle edges never share a
    // mincut side. A pair around one node with a subtree is left through
    // that node's tree edge instead.
    const ProperPath pw = c.projection(w);
    const bool v1 = uses_edge(c, pv, k.e1), w1 = uses_edge(c, pw, k.e1);
    const bool v2 = uses_edge(c, pv, k.e2), w2 = uses_edge(c, pw, k.e2);
    if ((v1 || v2) && (w1 || w2) && v1 != w1) return false;
  }
  probes::add();
  auto b = entry(v, w);
  require(b.has_value(), "units stretched across one bunch share no edge");
  const int end = c.far(pv.a, k) == far_side ? 0 : 1;
  return (*b >> end) & 1;
}

// ---------------------------------------------------------------------------
// MincutPairIndex

MincutPairIndex MincutPairIndex::build(std::shared_ptr<const Carcass> c) {
  MincutPairIndex idx;
  idx.c_ = std::move(c);
  idx.m_ = NearestMincutMatrix::build(*idx.c_);
  return idx;
}

std::optional<MincutPairIndex::Hit> MincutPairIndex::search(Vertex a, Vertex b, Vertex c, Vertex d) const {
  const Carcass& C = *c_;
  probes::add(4);
  const UnitId ua = C.phi(a), ub = C.phi(b), uc = C.phi(c), ud = C.phi(d);
  if (ua == ub || uc == ud) return std::nullopt;
  const ProperPath p1 = C.pair_projection(ua, ub), p2 = C.pair_projection(uc, ud);
  const PathIntersection r = C.intersect(p1, p2);
  std::vector<MinimalCut> cand;
  switch (r.kind) {
    case IntersectionKind::Disjoint:
    case IntersectionKind::SingleNode:
      return std::nullopt;
    case IntersectionKind::SharedCyclePair:
      cand.push_back({std::min(r.edge, r.edge2), std::max(r.edge, r.edge2)});
      break;
    case IntersectionKind::SharedEdge: {
      // Sides of the endpoints change only where their paths end, so one
      // bunch on each stretch of the shared part between such ends suffices.
      std::vector<NodeId> ev{r.q1, r.q2};
      for (UnitId u : {ua, ub, uc, ud}) {
        const ProperPath p = C.projection(u);
        for (NodeId x : {p.a, p.b})
          if (C.on_path(x, r.q1, r.q2)) add_unique(ev, x);
      }
      for (NodeId x : ev)
        for (NodeId y : {r.q1, r.q2})
          if (x != y) add_unique(cand, C.cut_of_edge(edge_toward(C, x, y)));
      break;
    }
  }
  for (MinimalCut k : cand) {
    const std::array<Side, 4> s{vertex_side(C, a, k), vertex_side(C, b, k), vertex_side(C, c, k), vertex_side(C, d, k)};
    // Orientations in the order xx', xy', yx', yy'.
    for (int o = 0; o < 4; ++o) {
      const int p = o < 2 ? 0 : 1, q = 2 + (o % 2);
      std::vector<Pinned> in{{p == 0 ? a : b, s[p]}, {q == 2 ? c : d, s[q]}};
      std::vector<Pinned> out{{p == 0 ? b : a, s[1 - p]}, {q == 2 ? d : c, s[5 - q]}};
      if (placeable(C, m_, k, in, out)) {
        return Hit{k, {in[0].v, in[1].v}};
      }
    }
  }
  return std::nullopt;
}

bool MincutPairIndex::common(Vertex a, Vertex b, Vertex c, Vertex d) const { return search(a, b, c, d).has_value(); }

std::optional<VSet> MincutPairIndex::common_side(Vertex a, Vertex b, Vertex c, Vertex d) const {
  auto h = search(a, b, c, d);
  if (!h) return std::nullopt;
  std::vector<Pinned> in;
  for (Vertex v : h->in) in.push_back({v, c_->side_of(c_->projection(c_->phi(v)), h->cut)});
  return near_side(*c_, m_, h->cut, in);
}

// ---------------------------------------------------------------------------
// S* labels

int SteinerLabels::label_of(VSet cut) const {
  auto it = std::lower_bound(cuts.begin(), cuts.end(), cut);
  if (it == cuts.end() || *it != cut) return -1;
  return label[it - cuts.begin()];
}

SteinerLabels construct_sstar(const MultiGraph& gw, VSet W, Vertex s, int cap, const std::vector<VSet>& cuts) {
  if (!has(W, s) || !has(gw.steiner(), s)) fail(Errc::VertexNotInClass, "class terminal not in the class");
  std::vector<VSet> expect;
  for (VSet c : cuts_containing(gw, s, cap))
    if (W & ~c) expect.push_back(c);
  SteinerLabels L;
  L.cuts = cuts;
  std::sort(L.cuts.begin(), L.cuts.end());
  L.cuts.erase(std::unique(L.cuts.begin(), L.cuts.end()), L.cuts.end());
  if (L.cuts != expect)
    fail(Errc::IncompleteFamily, fmt::format("{} cuts given, {} expected", L.cuts.size(), expect.size()));
  L.label.assign(L.cuts.size(), -1);
  const VSet all = gw.all();
  VSet pool = gw.steiner() & ~bit(s);
  std::size_t unmarked = L.cuts.size();
  while (pool && unmarked) {
    const Vertex t = lowest(pool);
    pool &= ~bit(t);
    bool used = false;
    for (std::size_t i = 0; i < L.cuts.size(); ++i) {
      const VSet comp = all & ~L.cuts[i];
      if (L.label[i] >= 0 || !has(comp, t)) continue;
      L.label[i] = t;
      --unmarked;
      used = true;
      pool &= ~(comp & gw.steiner());
    }
    if (used) L.sstar.push_back(t);
  }
  return L;
}

// ---------------------------------------------------------------------------
// DualOracle

DualOracle DualOracle::build(const MultiGraph& g) {
  DualOracle o;
  o.carcass_ = std::make_shared<const Carcass>(Carcass::build(g));
  o.plus1_ = MinPlusOneIndex::build(o.carcass_);
  o.pairs_ = MincutPairIndex::build(o.carcass_);
  for (UnitId w = 0; w < o.carcass_->unit_count(); ++w)
    if (const ClassIndex* ci = o.plus1_.class_index(w)) o.add_class(*ci);
  const auto cuts = o.carcass_->minimal_cuts();
  require(!cuts.empty(), "skeleton without minimal cuts");
  o.some_mincut_ = o.carcass_->tight_side(cuts.front(), true);
  o.build_plan();
  return o;
}

void DualOracle::add_labels(const ClassIndex& ci) {
  const ClassGraph& cw = ci.class_graph();
  const MultiGraph& gw = cw.graph;
  const int cap = ci.host().lambda() + 1;
  std::vector<VSet> cuts;
  for (VSet c : cuts_containing(gw, ci.class_terminal(), cap))
    if (cw.local & ~c) cuts.push_back(c);
  LabelInfo info;
  info.labels = construct_sstar(gw, cw.local, ci.class_terminal(), cap, cuts);
  info.by_family.assign(gw.n(), {});
  for_each_vertex(cw.local, [&](int u) {
    for (VSet comp : ci.family_local(u).complements) info.by_family[u].push_back(info.labels.label_of(gw.all() & ~comp));
  });
  labels_.emplace(&ci, std::move(info));
}

void DualOracle::add_class(const ClassIndex& ci) {
  switch (ci.kind()) {
    case ClassKind::Singleton:
      add_labels(ci);
      break;
    case ClassKind::MultiTerminal:
      add_labels(*ci.merged());
      if (ci.split()) {
        // The class index owns the split skeleton and outlives this map.
        std::shared_ptr<const Carcass> view(std::shared_ptr<const Carcass>{}, ci.split());
        splits_.emplace(&ci, MincutPairIndex::build(view));
      }
      break;
    case ClassKind::Stretched:
    case ClassKind::TerminalUnit:
      for (int i = 0; i < ci.cover_count(); ++i) add_labels(ci.cover_class(i));
      break;
  }
}

const SteinerLabels* DualOracle::labels(const ClassIndex* ci) const {
  auto it = labels_.find(ci);
  return it == labels_.end() ? nullptr : &it->second.labels;
}

const std::vector<std::vector<int>>* DualOracle::family_labels(const ClassIndex* ci) const {
  auto it = labels_.find(ci);
  return it == labels_.end() ? nullptr : &it->second.by_family;
}

const MincutPairIndex* DualOracle::split_pairs(const ClassIndex* ci) const {
  auto it = splits_.find(ci);
  return it == splits_.end() ? nullptr : &it->second;
}

std::optional<VSet> DualOracle::singleton_pair(const ClassIndex& ci, Vertex x, Vertex y, Vertex x2, Vertex y2,
                                               bool want_side) const {
  probes::add();
  const LabelInfo& li = labels_.at(&ci);
  const VSet all = ci.class_graph().graph.all();
  const VSet steiner = ci.class_graph().graph.steiner();
  for (int o = 0; o < 4; ++o) {
    const Vertex p = o < 2 ? x : y, q = o < 2 ? y : x;
    const Vertex p2 = o % 2 == 0 ? x2 : y2, q2 = o % 2 == 0 ? y2 : x2;
    if (p == q || p2 == q2 || p == q2 || p2 == q) continue;
    const NearestCutFamily& f1 = ci.family_local(p);
    const NearestCutFamily& f2 = ci.family_local(p2);
    probes::add(4);
    auto holds = [](const NearestCutFamily& f, int c, Vertex v) { return f.marks[v][0] == c || f.marks[v][1] == c; };
    for (int c1 : f1.marks[q]) {
      if (c1 < 0 || !holds(f1, c1, q2)) continue;
      for (int c2 : f2.marks[q]) {
        if (c2 < 0 || !holds(f2, c2, q2)) continue;
        probes::add(2);
        // Equal labels imply a joint terminal; the converse can fail, so the
        // stored complements are intersected directly.
        const int l1 = li.by_family[p][c1], l2 = li.by_family[p2][c2];
        if ((l1 >= 0 && l1 == l2) || (f1.complements[c1] & f2.complements[c2] & steiner)) {
          if (!want_side) return VSet{0};
          return (all & ~f1.complements[c1]) | (all & ~f2.complements[c2]);
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<VSet> DualOracle::same_class(const ClassIndex& ci, Vertex x, Vertex y, Vertex x2, Vertex y2,
                                           bool want_side) const {
  const Vertex lx = ci.local_vertex(x), ly = ci.local_vertex(y), lx2 = ci.local_vertex(x2), ly2 = ci.local_vertex(y2);
  auto lifted = [&](std::optional<VSet> r) -> std::optional<VSet> {
    if (!r || !want_side) return r;
    return ci.lift(*r);
  };
  switch (ci.kind()) {
    case ClassKind::Singleton:
      return lifted(singleton_pair(ci, lx, ly, lx2, ly2, want_side));
    case ClassKind::MultiTerminal: {
      const auto& mm = ci.merge_map();
      probes::add(4);
      if (auto r = same_class(*ci.merged(), mm[lx], mm[ly], mm[lx2], mm[ly2], want_side)) {
        if (!want_side) return r;
        VSet side = 0;
        for (Vertex z = 0; z < ci.class_graph().graph.n(); ++z)
          if (has(*r, mm[z])) side |= bit(z);
        return ci.lift(side);
      }
      if (const MincutPairIndex* sp = split_pairs(&ci)) {
        if (!want_side) return sp->common(lx, ly, lx2, ly2) ? std::optional<VSet>(0) : std::nullopt;
        return lifted(sp->common_side(lx, ly, lx2, ly2));
      }
      return std::nullopt;
    }
    case ClassKind::Stretched:
    case ClassKind::TerminalUnit:
      for (int i = 0; i < ci.cover_count(); ++i)
        if (auto r = same_class(ci.cover_class(i), lx, ly, lx2, ly2, want_side)) return lifted(r);
      return std::nullopt;
  }
  return std::nullopt;
}

FailureClass DualOracle::classify_failure(EdgeId e, EdgeId f) const {
  const MultiGraph& g = carcass_->graph();
  if (!g.has_edge_id(e)) fail(Errc::UnknownEdge, fmt::format("edge {}", e));
  if (!g.has_edge_id(f)) fail(Errc::UnknownEdge, fmt::format("edge {}", f));
  if (e == f) fail(Errc::SameEdge, fmt::format("edge {} given twice", e));
  const Edge& ee = g.edge_by_id(e);
  const Edge& ff = g.edge_by_id(f);
  probes::add(4);
  const UnitId a = carcass_->phi(ee.u), b = carcass_->phi(ee.v), c = carcass_->phi(ff.u), d = carcass_->phi(ff.v);
  FailureClass r;
  const bool in_e = a == b, in_f = c == d;
  if (in_e && in_f) {
    if (a == c) {
      r.kind = FailureCase::SameClass;
      r.cls = a;
    } else {
      r.kind = FailureCase::SeparateClasses;
    }
  } else if (in_e || in_f) {
    r.kind = FailureCase::OneCrossing;
    r.live = in_e ? f : e;
  } else {
    r.kind = FailureCase::BothCrossing;
  }
  return r;
}

DualOracle::FailResult DualOracle::fail_eval(EdgeId e, EdgeId f, bool want_side) const {
  const FailureClass fc = classify_failure(e, f);
  const MultiGraph& g = carcass_->graph();
  const Edge& ee = g.edge_by_id(e);
  const Edge& ff = g.edge_by_id(f);
  const int lam = lambda();
  auto crossing_side = [&](const Edge& live) -> std::optional<VSet> {
    if (!want_side) return std::nullopt;
    return carcass_->report_separating_mincut(live.u, live.v)->side;
  };
  FailResult r;
  switch (fc.kind) {
    case FailureCase::SeparateClasses:
      r.capacity = lam;
      r.side = some_mincut_;
      break;
    case FailureCase::SameClass: {
      auto hit = same_class(*plus1_.class_index(fc.cls), ee.u, ee.v, ff.u, ff.v, want_side);
      r.capacity = hit ? lam - 1 : lam;
      r.side = hit ? hit : std::optional<VSet>(some_mincut_);
      break;
    }
    case FailureCase::OneCrossing:
      r.capacity = lam - 1;
      r.side = crossing_side(fc.live == e ? ee : ff);
      break;
    case FailureCase::BothCrossing: {
      std::optional<VSet> hit;
      bool both = false;
      if (lam >= 2) {
        if (want_side) {
          hit = pairs_.common_side(ee.u, ee.v, ff.u, ff.v);
          both = hit.has_value();
        } else {
          both = pairs_.common(ee.u, ee.v, ff.u, ff.v);
        }
      }
      r.capacity = both ? lam - 2 : lam - 1;
      r.side = both ? hit : crossing_side(ee);
      break;
    }
  }
  r.capacity = std::max(r.capacity, 0);
  return r;
}

int DualOracle::query_fail_capacity(EdgeId e, EdgeId f) const { return fail_eval(e, f, false).capacity; }

Cut DualOracle::query_fail_cut(EdgeId e, EdgeId f) const {
  FailResult r = fail_eval(e, f, true);
  require(r.side.has_value(), "failure witness missing");
  const MultiGraph& g = carcass_->graph();
  const VSet side = *r.side;
  int cap = cut_value(g, side);
  for (EdgeId id : {e, f}) {
    const Edge& x = g.edge_by_id(id);
    if (has(side, x.u) != has(side, x.v)) --cap;
  }
  require(cap == r.capacity, "failure witness has the wrong capacity");
  return Cut{side, cap, classify_cut(g, side).steiner};
}

std::pair<int, Cut> DualOracle::single_edge_fail(EdgeId e) const {
  const MultiGraph& g = carcass_->graph();
  if (!g.has_edge_id(e)) fail(Errc::UnknownEdge, fmt::format("edge {}", e));
  const Edge& x = g.edge_by_id(e);
  probes::add(2);
  const int lam = lambda();
  VSet side = some_mincut_;
  int cap = lam;
  if (carcass_->phi(x.u) != carcass_->phi(x.v)) {
    side = carcass_->report_separating_mincut(x.u, x.v)->side;
    cap = lam - 1;
  }
  return {cap, Cut{side, cap, true}};
}

// ---------------------------------------------------------------------------
// Insertions

void DualOracle::build_plan() {
  const Carcass& c = *carcass_;
  const MultiGraph& g = c.graph();
  InsertionPlan& p = plan_;
  for (NodeId x = 0; x < c.node_count(); ++x) {
    if (c.skeleton_degree(x) == 1) p.leaves.push_back(x);
    if (c.skeleton_degree(x) >= 3) p.branches.push_back(x);
  }
  const int l = static_cast<int>(p.leaves.size());
  require(l >= 2, "skeleton with fewer than two leaves");
  for (int i = 0; i < std::min(l, 5); ++i) {
    const NodeId x = p.leaves[i];
    const MinimalCut k{c.incident_edges(x).front(), -1};
    require(c.edges()[k.e1].cycle < 0, "leaf on a cycle");
    p.leaf_units.push_back(c.node_unit(x));
    p.leaf_sides.push_back(c.tight_side(k, c.far(x, k)));
    require(p.leaf_sides.back() == c.unit(c.node_unit(x)).members, "leaf tight cut is not its class");
  }
  if (l >= 5) {
    p.shape = InsertionShape::Suppressive;
  } else if (l == 4) {
    bool star = !c.cycles().empty();
    for (NodeId x : p.branches) star = star || c.skeleton_degree(x) >= 4;
    p.shape = star ? InsertionShape::FourCycleOrJunction : InsertionShape::TwoThreeJunctions;
    for (MinimalCut k : c.minimal_cuts()) {
      int mask = 0;
      for (int i = 0; i < 4; ++i)
        if (c.far(p.leaves[i], k)) mask |= 1 << i;
      if (mask & 1) mask ^= 0xF;
      p.leaf_splits.emplace(mask, k);
    }
  } else if (l == 3) {
    require(c.cycles().empty() && p.branches.size() == 1, "three leaves without a single junction");
    p.shape = InsertionShape::OneThreeJunction;
  } else {
    require(c.cycles().empty() && p.branches.empty(), "two leaves on a skeleton that is not a path");
    p.shape = InsertionShape::Path;
    p.unit_s = p.leaf_sides[0];
    p.unit_t = p.leaf_sides[1];
    const int cap = lambda() + 1;
    const VSet ends = p.unit_s | p.unit_t;
    for (Vertex t : members(g.steiner() & ~ends)) {
      FlowResult r = max_flow_mincut(g, bit(t), ends);
      if (r.value <= cap) {
        p.joint_side = r.min_source_side;
        break;
      }
    }
    auto table = [&](VSet U, VSet other) {
      const auto mem = members(U);
      const int n = static_cast<int>(mem.size());
      std::vector<char> t(static_cast<std::size_t>(n) * (n + 1) / 2, 0);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          t[tri_index(i, j, n)] = find_separation(g, cap, U, other | bit(mem[i]) | bit(mem[j])).has_value();
      return t;
    };
    p.sep_s = table(p.unit_s, p.unit_t);
    p.sep_t = table(p.unit_t, p.unit_s);
  }
}

DualOracle::InsertResult DualOracle::insert_eval(std::pair<Vertex, Vertex> e, std::pair<Vertex, Vertex> f,
                                                 bool want_side) const {
  const Carcass& c = *carcass_;
  const MultiGraph& g = c.graph();
  const std::array<Vertex, 4> v{e.first, e.second, f.first, f.second};
  for (Vertex x : v)
    if (x < 0 || x >= g.n()) fail(Errc::InvalidVertex, fmt::format("vertex {}", x));
  if (v[0] == v[1] || v[2] == v[3]) fail(Errc::SelfLoopRejected, "inserted edge is a self-loop");
  const int lam = lambda();
  const InsertionPlan& p = plan_;
  probes::add(4);
  const std::array<UnitId, 4> u{c.phi(v[0]), c.phi(v[1]), c.phi(v[2]), c.phi(v[3])};

  // A leaf class without an endpoint is a mincut neither edge crosses.
  for (std::size_t i = 0; i < p.leaf_units.size(); ++i) {
    probes::add();
    if (std::find(u.begin(), u.end(), p.leaf_units[i]) == u.end()) return {lam, p.leaf_sides[i]};
  }
  const int l = static_cast<int>(p.leaves.size());
  require(l <= 4, "five leaves all hit by four endpoints");

  if (l == 4) {
    // Every endpoint sits in its own leaf class, so each bunch is crossed by
    // all or none of its mincuts.
    std::array<int, 4> li{};
    for (int j = 0; j < 4; ++j)
      li[j] = static_cast<int>(std::find(p.leaf_units.begin(), p.leaf_units.end(), u[j]) - p.leaf_units.begin());
    std::optional<MinimalCut> one;
    for (const auto& [mask, k] : p.leaf_splits) {
      probes::add();
      const bool s1 = ((mask >> li[0]) & 1) != ((mask >> li[1]) & 1);
      const bool s2 = ((mask >> li[2]) & 1) != ((mask >> li[3]) & 1);
      if (!s1 && !s2) return {lam, want_side ? c.tight_side(k, false) : 0};
      if (s1 != s2 && !one) one = k;
    }
    require(one.has_value(), "four leaf classes but every bunch is crossed twice");
    return {lam + 1, want_side ? c.tight_side(*one, false) : 0};
  }

  // Tree skeleton with at most three leaves: bunches between consecutive
  // path ends, leaves and the junction behave alike.
  std::vector<NodeId> ev = p.leaves;
  for (NodeId x : p.branches) add_unique(ev, x);
  for (UnitId w : u) {
    const ProperPath pp = c.projection(w);
    add_unique(ev, pp.a);
    add_unique(ev, pp.b);
  }
  std::vector<MinimalCut> cand;
  for (NodeId x : ev)
    for (NodeId y : ev)
      if (x != y) add_unique(cand, c.cut_of_edge(edge_toward(c, x, y)));

  std::optional<std::pair<MinimalCut, std::vector<Pinned>>> one;
  for (MinimalCut k : cand) {
    std::array<Side, 4> s{};
    for (int j = 0; j < 4; ++j) s[j] = vertex_side(c, v[j], k);
    auto try_place = [&](int m1, int m2) -> std::optional<std::vector<Pinned>> {
      // m: 0 both in, 1 both out, 2 first in, 3 second in.
      std::vector<Pinned> in, out;
      auto put = [&](int m, int i) {
        const bool first_in = m == 0 || m == 2, second_in = m == 0 || m == 3;
        (first_in ? in : out).push_back({v[i], s[i]});
        (second_in ? in : out).push_back({v[i + 1], s[i + 1]});
      };
      put(m1, 0);
      put(m2, 2);
      if (placeable(c, pairs_.matrix(), k, in, out)) return in;
      return std::nullopt;
    };
    for (int m1 = 0; m1 < 2; ++m1)
      for (int m2 = 0; m2 < 2; ++m2)
        if (auto in = try_place(m1, m2)) return {lam, want_side ? near_side(c, pairs_.matrix(), k, *in) : 0};
    if (one) continue;
    for (int m1 = 0; m1 < 4 && !one; ++m1)
      for (int m2 = 0; m2 < 4 && !one; ++m2) {
        if ((m1 < 2) == (m2 < 2)) continue;
        if (auto in = try_place(m1, m2)) one = std::pair{k, *in};
      }
  }
  if (one) return {lam + 1, want_side ? near_side(c, pairs_.matrix(), one->first, one->second) : 0};

  // Every mincut is crossed by both edges, which forces each edge to join
  // the two leaf classes of a path.
  require(l == 2, "every mincut crossed twice off a path skeleton");
  auto orient = [&](Vertex a, Vertex b) {
    if (has(p.unit_s, a) && has(p.unit_t, b)) return std::pair{a, b};
    require(has(p.unit_s, b) && has(p.unit_t, a), "edge does not join the path ends");
    return std::pair{b, a};
  };
  const auto [x, y] = orient(v[0], v[1]);
  const auto [x2, y2] = orient(v[2], v[3]);
  const int cap = lam + 1;
  if (p.joint_side) return {lam + 1, *p.joint_side};
  probes::add(2);
  const int ns = popcount(p.unit_s), nt = popcount(p.unit_t);
  if (p.sep_s[tri_index(rank_in(p.unit_s, x), rank_in(p.unit_s, x2), ns)]) {
    if (!want_side) return {lam + 1, 0};
    return {lam + 1, *find_separation(g, cap, p.unit_s, p.unit_t | bit(x) | bit(x2))};
  }
  if (p.sep_t[tri_index(rank_in(p.unit_t, y), rank_in(p.unit_t, y2), nt)]) {
    if (!want_side) return {lam + 1, 0};
    return {lam + 1, *find_separation(g, cap, p.unit_t, p.unit_s | bit(y) | bit(y2))};
  }
  return {lam + 2, p.unit_s};
}

int DualOracle::query_insert_capacity(std::pair<Vertex, Vertex> e, std::pair<Vertex, Vertex> f) const {
  return insert_eval(e, f, false).capacity;
}

Cut DualOracle::query_insert_cut(std::pair<Vertex, Vertex> e, std::pair<Vertex, Vertex> f) const {
  InsertResult r = insert_eval(e, f, true);
  const MultiGraph& g = carcass_->graph();
  int cap = cut_value(g, r.side);
  for (auto [a, b] : {e, f})
    if (has(r.side, a) != has(r.side, b)) ++cap;
  require(cap == r.capacity, "insertion witness has the wrong capacity");
  return Cut{r.side, cap, classify_cut(g, r.side).steiner};
}

std::pair<int, Cut> DualOracle::single_edge_insert(Vertex a, Vertex b) const {
  const Carcass& c = *carcass_;
  const MultiGraph& g = c.graph();
  if (a < 0 || a >= g.n() || b < 0 || b >= g.n()) fail(Errc::InvalidVertex, "vertex out of range");
  if (a == b) fail(Errc::SelfLoopRejected, "inserted edge is a self-loop");
  probes::add(2);
  const UnitId ua = c.phi(a), ub = c.phi(b);
  const int lam = lambda();
  for (std::size_t i = 0; i < plan_.leaf_units.size(); ++i) {
    probes::add();
    if (plan_.leaf_units[i] != ua && plan_.leaf_units[i] != ub) return {lam, Cut{plan_.leaf_sides[i], lam, true}};
  }
  // Two leaves, one endpoint in each: every mincut is crossed.
  return {lam + 1, Cut{plan_.leaf_sides[0], lam + 1, true}};
}

// ---------------------------------------------------------------------------
// Footprints

std::size_t DualOracle::capacity_entries() const {
  std::size_t total = carcass_->stored_entries() + pairs_.matrix().entries();
  for (UnitId w = 0; w < carcass_->unit_count(); ++w)
    if (const ClassIndex* ci = plus1_.class_index(w)) total += ci->capacity_entries();
  for (const auto& [ci, li] : labels_) {
    total += li.labels.sstar.size();
    for (const auto& f : li.by_family) total += f.size();
  }
  for (const auto& [ci, sp] : splits_) total += sp.matrix().entries();
  total += 4 + plan_.leaves.size() + plan_.leaf_units.size() + plan_.branches.size() + plan_.leaf_splits.size() +
           plan_.sep_s.size() + plan_.sep_t.size();
  return total;
}

std::size_t DualOracle::full_entries() const {
  std::size_t total = plus1_.stored_entries() + pairs_.matrix().entries();
  for (const auto& [ci, li] : labels_) {
    total += li.labels.sstar.size();
    for (const auto& f : li.by_family) total += f.size();
  }
  for (const auto& [ci, sp] : splits_) total += sp.matrix().entries();
  const std::size_t n = static_cast<std::size_t>(carcass_->graph().n());
  total += 4 + plan_.leaves.size() + plan_.leaf_units.size() + plan_.branches.size() + plan_.leaf_splits.size() +
           plan_.sep_s.size() + plan_.sep_t.size() + n * (plan_.leaf_sides.size() + 1) + (plan_.joint_side ? n : 0);
  return total;
}

LabelAudit audit_labels(const DualOracle& o) {
  LabelAudit a;
  auto visit = [&](const ClassIndex& ci) {
    ++a.structures;
    const SteinerLabels& L = *o.labels(&ci);
    const auto& byf = *o.family_labels(&ci);
    const MultiGraph& gw = ci.class_graph().graph;
    const VSet W = ci.class_graph().local;
    for (std::size_t i = 0; i < L.cuts.size(); ++i) {
      ++a.cuts;
      if (L.label[i] < 0)
        ++a.unlabeled;
      else if (has(L.cuts[i], L.label[i]))
        ++a.unsound;
    }
    for (Vertex p : members(W))
      for (Vertex p2 : members(W)) {
        const auto& f1 = ci.family_local(p);
        const auto& f2 = ci.family_local(p2);
        for (Vertex q : members(W))
          for (Vertex q2 : members(W)) {
            if (q == p || q == p2 || q2 == p || q2 == p2) continue;
            for (std::size_t c1 = 0; c1 < f1.complements.size(); ++c1)
              for (std::size_t c2 = 0; c2 < f2.complements.size(); ++c2) {
                const VSet k1 = f1.complements[c1], k2 = f2.complements[c2];
                if (!has(k1, q) || !has(k1, q2) || !has(k2, q) || !has(k2, q2)) continue;
                if (p == p2 && c1 == c2) continue;
                ++a.pairs;
                const bool joint = (k1 & k2 & gw.steiner()) != 0;
                const bool same = byf[p][c1] >= 0 && byf[p][c1] == byf[p2][c2];
                if (joint && !same) ++a.joint_unlabeled;
                if (!joint && same) ++a.label_no_joint;
              }
          }
      }
  };
  const Carcass& c = o.carcass();
  for (UnitId w = 0; w < c.unit_count(); ++w) {
    const ClassIndex* ci = o.minplus1().class_index(w);
    if (!ci) continue;
    switch (ci->kind()) {
      case ClassKind::Singleton: visit(*ci); break;
      case ClassKind::MultiTerminal: visit(*ci->merged()); break;
      default:
        for (int i = 0; i < ci->cover_count(); ++i) visit(ci->cover_class(i));
    }
  }
  return a;
}

}  // namespace sck
