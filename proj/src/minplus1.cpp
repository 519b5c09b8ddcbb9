#include "sck/minplus1.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "sck/reference.hpp"

namespace sck {

const char* class_kind_name(ClassKind k) {
  switch (k) {
    case ClassKind::Singleton: return "singleton";
    case ClassKind::MultiTerminal: return "multi_terminal";
    case ClassKind::Stretched: return "stretched";
    case ClassKind::TerminalUnit: return "terminal_unit";
  }
  return "?";
}

const char* cut_level_name(CutLevel l) {
  switch (l) {
    case CutLevel::AtLambda: return "lambda";
    case CutLevel::AtLambdaPlus1: return "lambda+1";
    case CutLevel::Above: return "above";
  }
  return "?";
}

namespace {

int global_mincut(const MultiGraph& g) {
  int best = INT_MAX;
  for (Vertex v = 1; v < g.n(); ++v) best = std::min(best, flow_value(g, bit(0), bit(v), best));
  return best == INT_MAX ? 0 : best;
}

ClassKind kind_of(const Carcass& c, UnitId w) {
  const Unit& u = c.unit(w);
  int terms = popcount(u.members & c.graph().steiner());
  if (terms == 1) return ClassKind::Singleton;
  if (terms > 1) return ClassKind::MultiTerminal;
  return u.stretched ? ClassKind::Stretched : ClassKind::TerminalUnit;
}

// Bunches adjacent to a skeleton node, ascending.
std::vector<MinimalCut> adjacent_cuts(const Carcass& c, NodeId x) {
  std::set<MinimalCut> out;
  for (int e : c.incident_edges(x)) {
    const SkeletonEdge& se = c.edges()[e];
    if (se.cycle < 0) {
      out.insert({e, -1});
      continue;
    }
    int other = -1;
    for (int f : c.incident_edges(x))
      if (f != e && c.edges()[f].cycle == se.cycle) other = f;
    require(other >= 0, "cycle node with one cycle edge");
    out.insert({std::min(e, other), std::max(e, other)});
  }
  return {out.begin(), out.end()};
}

Side node_side(const Carcass& c, NodeId x, MinimalCut k) { return c.far(x, k) ? Side::Far : Side::Near; }

}  // namespace

Vertex ClassGraph::local_of(Vertex host_vertex) const {
  if (!has(members, host_vertex)) fail(Errc::VertexNotInClass, fmt::format("vertex {}", host_vertex));
  return map.at(host_vertex);
}

ClassGraph build_class_graph(const Carcass& host, UnitId w) {
  if (w < 0 || w >= host.unit_count()) fail(Errc::NotAClass, "unknown unit");
  const MultiGraph& g = host.graph();
  const Unit& unit = host.unit(w);
  ClassGraph cw;
  cw.unit = w;
  cw.members = unit.members;
  std::vector<VSet> groups;
  std::vector<MinimalCut> group_cut;
  std::vector<char> group_far;
  if (unit.stretched) {
    auto pe = host.path_edges(unit.path);
    MinimalCut b = host.cut_of_edge(*std::min_element(pe.begin(), pe.end()));
    require(host.side_of(unit.path, b) == Side::Stretched, "class is not stretched across its chosen bunch");
    groups = {host.tight_side(b, false), host.tight_side(b, true)};
    group_cut = {b, b};
    group_far = {0, 1};
  } else {
    cw.node = unit.path.a;
    auto cuts = adjacent_cuts(host, cw.node);
    if (cuts.empty()) fail(Errc::NotAClass, "class node has no adjacent bunch");
    groups.assign(cuts.size(), 0);
    for (Vertex y = 0; y < g.n(); ++y) {
      if (has(unit.members, y)) continue;
      ProperPath p = host.projection(host.phi(y));
      bool placed = false;
      for (size_t i = 0; i < cuts.size() && !placed; ++i)
        if (host.side_of(p, cuts[i]) != node_side(host, cw.node, cuts[i])) {
          groups[i] |= bit(y);
          placed = true;
        }
      require(placed, "vertex outside the class survives contraction");
    }
    group_cut = cuts;
    for (MinimalCut k : cuts) group_far.push_back(node_side(host, cw.node, k) == Side::Near ? 1 : 0);
  }
  Contraction con = contract(g, groups);
  cw.graph = std::move(con.graph);
  cw.map = std::move(con.map);
  cw.source.assign(cw.graph.n(), MinimalCut{});
  cw.source_far.assign(cw.graph.n(), 0);
  for (size_t i = 0; i < groups.size(); ++i) {
    require(groups[i] != 0, "empty contracted side");
    Vertex t = cw.map[lowest(groups[i])];
    cw.source[t] = group_cut[i];
    cw.source_far[t] = group_far[i];
  }
  for_each_vertex(unit.members, [&](int v) { cw.local |= bit(cw.map[v]); });
  cw.lambda_w = global_mincut(cw.graph);
  return cw;
}

std::vector<VSet> cuts_containing(const MultiGraph& g, Vertex s, int cap) {
  std::vector<VSet> out;
  for (const Cut& c : steiner_cuts_upto(g, cap)) {
    if (c.capacity != cap) continue;
    out.push_back(has(c.side, s) ? c.side : g.all() & ~c.side);
  }
  std::sort(out.begin(), out.end());
  return out;
}

NearestCutFamily nearest_cuts(const MultiGraph& g, VSet W, Vertex u, const std::vector<VSet>& cuts, bool small_mincut) {
  if (!has(W, u)) fail(Errc::VertexNotInClass, fmt::format("vertex {}", u));
  std::vector<VSet> cand;
  for (VSet c : cuts)
    if (has(c, u) && (W & ~c)) cand.push_back(c);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  std::vector<VSet> kept;
  for (VSet c : cand) {
    bool minimal = true;
    for (VSet d : cand)
      if (d != c && (d & ~c) == 0) minimal = false;
    if (minimal) kept.push_back(c);
  }
  std::vector<VSet> comp;
  for (VSet c : kept) comp.push_back(g.all() & ~c);

  std::vector<char> alive(comp.size(), 1);
  auto marks_of = [&](Vertex v) {
    std::vector<int> out;
    for (size_t i = 0; i < comp.size(); ++i)
      if (alive[i] && has(comp[i], v)) out.push_back(static_cast<int>(i));
    return out;
  };
  if (small_mincut) {
    // Of three complements sharing a class vertex, one lies inside the
    // union of the other two on the class; drop it.
    bool changed = true;
    while (changed) {
      changed = false;
      for (Vertex v : members(W)) {
        auto mk = marks_of(v);
        if (mk.size() < 3) continue;
        int drop = -1;
        for (int j = 0; j < 3 && drop < 0; ++j) {
          VSet own = comp[mk[j]] & W;
          VSet others = (comp[mk[(j + 1) % 3]] | comp[mk[(j + 2) % 3]]) & W;
          if ((own & ~others) == 0) drop = mk[j];
        }
        require(drop >= 0, "three nearest cuts share a class vertex and none is covered");
        alive[drop] = 0;
        changed = true;
        break;
      }
    }
  }

  NearestCutFamily fam;
  fam.u = u;
  for (size_t i = 0; i < comp.size(); ++i)
    if (alive[i]) {
      fam.complements.push_back(comp[i]);
      fam.m_cut.push_back(popcount(comp[i] & g.steiner()) > 1 ? 1 : 0);
    }
  fam.marks.assign(g.n(), {-1, -1});
  for (size_t i = 0; i < fam.complements.size(); ++i)
    for_each_vertex(fam.complements[i] & W, [&](int v) {
      auto& m = fam.marks[v];
      if (m[0] < 0) m[0] = static_cast<int>(i);
      else if (m[1] < 0) m[1] = static_cast<int>(i);
      else fail(Errc::Internal, "class vertex in three nearest cut complements");
    });
  return fam;
}

MultiGraph cover_graph(const MultiGraph& g, Vertex x, Vertex t) {
  if (has(g.steiner(), x)) fail(Errc::ClassHasTerminal, "anchor must not be a terminal");
  return surgery(g, {}, {{x, t}, {x, t}});
}

std::pair<MultiGraph, MultiGraph> covering_graphs(const MultiGraph& g, Vertex x, Vertex s, Vertex t) {
  return {cover_graph(g, x, s), cover_graph(g, x, t)};
}

// ---------------------------------------------------------------------------
// ClassIndex

std::unique_ptr<ClassIndex> ClassIndex::build(std::shared_ptr<const Carcass> host, UnitId w) {
  auto idx = std::unique_ptr<ClassIndex>(new ClassIndex());
  idx->host_ = host;
  idx->kind_ = kind_of(*host, w);
  idx->cw_ = build_class_graph(*host, w);
  ClassGraph& cw = idx->cw_;
  const MultiGraph& gw = cw.graph;
  const int lam = host->lambda();
  for (Vertex y = 0; y < host->graph().n(); ++y)
    if (cw.source[cw.map[y]].e1 < 0) idx->kept_.push_back({y, cw.map[y]});

  switch (idx->kind_) {
    case ClassKind::Singleton: {
      idx->s_local_ = cw.map[lowest(cw.members & host->graph().steiner())];
      auto cuts = cuts_containing(gw, idx->s_local_, lam + 1);
      idx->family_of_.assign(gw.n(), -1);
      for_each_vertex(cw.local, [&](int u) {
        idx->family_of_[u] = static_cast<int>(idx->families_.size());
        idx->families_.push_back(nearest_cuts(gw, cw.local, u, cuts, cw.lambda_w <= 3));
      });
      break;
    }
    case ClassKind::MultiTerminal: {
      VSet terms = cw.local & gw.steiner();
      Contraction m = contract(gw, {terms});
      idx->merge_map_ = m.map;
      auto mh = std::make_shared<const Carcass>(Carcass::build(m.graph));
      idx->merged_host_ = mh;
      idx->merged_ = ClassIndex::build(mh, mh->phi(m.map[lowest(terms)]));
      require(idx->merged_->kind() == ClassKind::Singleton, "merged class is not a singleton class");
      MultiGraph g2 = gw.with_steiner(terms);
      if (steiner_lambda(g2) == lam + 1) idx->split_ = std::make_shared<const Carcass>(Carcass::build(g2));
      break;
    }
    case ClassKind::Stretched:
    case ClassKind::TerminalUnit: {
      Vertex x = cw.map[lowest(cw.members)];
      for (Vertex t = 0; t < gw.n(); ++t) {
        if (cw.source[t].e1 < 0) continue;
        Cover cv;
        cv.anchor_terminal = t;
        auto cc = std::make_shared<const Carcass>(Carcass::build(cover_graph(gw, x, t)));
        cv.carcass = cc;
        cv.inner = ClassIndex::build(cc, cc->phi(x));
        require(cv.inner->kind() == ClassKind::Singleton, "covered class is not a singleton class");
        require((cv.inner->members() & (cw.local | bit(t))) == (cw.local | bit(t)), "cover lost part of the class");
        idx->covers_.push_back(std::move(cv));
      }
      break;
    }
  }
  cw.map.clear();
  cw.map.shrink_to_fit();
  return idx;
}

const NearestCutFamily& ClassIndex::family(Vertex u) const {
  if (kind_ != ClassKind::Singleton) fail(Errc::NotAClass, "families are kept for singleton classes");
  return families_[family_of_[local(u)]];
}

const NearestCutFamily& ClassIndex::family_local(Vertex local_u) const {
  if (kind_ != ClassKind::Singleton) fail(Errc::NotAClass, "families are kept for singleton classes");
  if (local_u < 0 || local_u >= static_cast<int>(family_of_.size()) || family_of_[local_u] < 0)
    fail(Errc::VertexNotInClass, fmt::format("local vertex {}", local_u));
  probes::add();
  return families_[family_of_[local_u]];
}

bool ClassIndex::belong_local(Vertex u, const std::vector<Vertex>& vs) const {
  if (vs.empty()) fail(Errc::BadIndex, "belong needs at least one vertex");
  if (vs.size() > 1 && cw_.lambda_w <= 3)
    fail(Errc::KTooLargeForSmallMincut, "several vertices need a class graph mincut of at least 4");
  probes::add();
  const NearestCutFamily& fam = families_[family_of_[u]];
  probes::add();
  for (int c : fam.marks[vs[0]]) {
    if (c < 0) continue;
    bool all = true;
    for (size_t i = 1; i < vs.size() && all; ++i) {
      probes::add();
      const auto& m = fam.marks[vs[i]];
      all = m[0] == c || m[1] == c;
    }
    if (all) return true;
  }
  return false;
}

Vertex ClassIndex::local(Vertex v) const {
  probes::add();
  auto it = std::lower_bound(kept_.begin(), kept_.end(), std::pair{v, Vertex{-1}});
  if (it == kept_.end() || it->first != v || !has(cw_.members, v))
    fail(Errc::VertexNotInClass, fmt::format("vertex {}", v));
  return it->second;
}

bool ClassIndex::belong(Vertex u, const std::vector<Vertex>& vs) const {
  std::vector<Vertex> lv;
  for (Vertex v : vs) lv.push_back(local(v));
  if (kind_ == ClassKind::Singleton) return belong_local(local(u), lv);
  if (kind_ == ClassKind::MultiTerminal) {
    for (Vertex& v : lv) v = merge_map_[v];
    return merged_->belong(merge_map_[local(u)], lv);
  }
  fail(Errc::NotAClass, "families are kept for classes with terminals");
}

bool ClassIndex::separable_local(Vertex u, Vertex v) const {
  switch (kind_) {
    case ClassKind::Singleton:
      return belong_local(u, {v}) || belong_local(v, {u});
    case ClassKind::MultiTerminal: {
      probes::add(2);
      if (merged_->separable(merge_map_[u], merge_map_[v])) return true;
      if (!split_) return false;
      probes::add(2);
      return split_->phi(u) != split_->phi(v);
    }
    default:
      for (const Cover& cv : covers_)
        if (cv.inner->separable(u, v)) return true;
      return false;
  }
}

bool ClassIndex::separable(Vertex u, Vertex v) const {
  return separable_local(local(u), local(v));
}

std::optional<VSet> ClassIndex::witness_local(Vertex u, Vertex v) const {
  const VSet all = cw_.graph.all();
  switch (kind_) {
    case ClassKind::Singleton: {
      const auto& fu = families_[family_of_[u]];
      for (int c : fu.marks[v])
        if (c >= 0) return all & ~fu.complements[c];
      const auto& fv = families_[family_of_[v]];
      for (int c : fv.marks[u])
        if (c >= 0) return fv.complements[c];
      return std::nullopt;
    }
    case ClassKind::MultiTerminal: {
      if (merged_->separable(merge_map_[u], merge_map_[v])) {
        VSet s1 = merged_->witness(merge_map_[u], merge_map_[v]);
        VSet side = 0;
        for (Vertex z = 0; z < cw_.graph.n(); ++z)
          if (has(s1, merge_map_[z])) side |= bit(z);
        return side;
      }
      if (split_) {
        if (auto c = split_->report_separating_mincut(u, v)) return has(c->side, u) ? c->side : all & ~c->side;
      }
      return std::nullopt;
    }
    default:
      for (const Cover& cv : covers_)
        if (cv.inner->separable(u, v)) return cv.inner->witness(u, v);
      return std::nullopt;
  }
}

VSet ClassIndex::lift(VSet local_side) const {
  const Carcass& h = *host_;
  const MultiGraph& g = h.graph();
  VSet side = 0;
  for (auto [y, l] : kept_)
    if (has(local_side, l)) side |= bit(y);
  if (kind_ == ClassKind::Stretched) {
    // Contracted vertices are the two tight sides of one bunch.
    Vertex near_t = -1, far_t = -1;
    MinimalCut b;
    for (Vertex t = 0; t < cw_.graph.n(); ++t) {
      if (cw_.source[t].e1 < 0) continue;
      b = cw_.source[t];
      (cw_.source_far[t] ? far_t : near_t) = t;
    }
    for (Vertex y = 0; y < g.n(); ++y) {
      Side sd = h.side_of(h.projection(h.phi(y)), b);
      if (sd == Side::Stretched) continue;
      if (has(local_side, sd == Side::Far ? far_t : near_t)) side |= bit(y);
    }
    return side;
  }
  // Each contracted vertex outside the side removes the region of the
  // skeleton beyond its bunch; a vertex stays when its projection avoids
  // every removed region.
  std::vector<char> removed(h.node_count(), 0);
  for (Vertex t = 0; t < cw_.graph.n(); ++t) {
    if (cw_.source[t].e1 < 0 || has(local_side, t)) continue;
    for (NodeId x = 0; x < h.node_count(); ++x)
      if (h.far(x, cw_.source[t]) == static_cast<bool>(cw_.source_far[t])) removed[x] = 1;
  }
  for (Vertex y = 0; y < g.n(); ++y) {
    if (has(cw_.members, y)) continue;
    ProperPath p = h.projection(h.phi(y));
    if (!removed[p.a] && !removed[p.b]) side |= bit(y);
  }
  return side;
}

VSet ClassIndex::witness(Vertex u, Vertex v) const {
  auto w = witness_local(local(u), local(v));
  if (!w) fail(Errc::NoWitness, "no (lambda+1) cut separates the pair");
  VSet side = lift(*w);
  return has(side, u) ? side : host_->graph().all() & ~side;
}

std::size_t ClassIndex::stored_entries() const {
  std::size_t total = 4 + kept_.size();
  for (Vertex t = 0; t < cw_.graph.n(); ++t)
    if (cw_.source[t].e1 >= 0) total += 2;
  const VSet stored = cw_.local | cw_.graph.steiner();
  for (const auto& f : families_) {
    total += 2 * static_cast<std::size_t>(popcount(cw_.local));
    for (VSet c : f.complements) total += 1 + popcount(c & stored);
  }
  for (const Cover& cv : covers_) total += cv.carcass->stored_entries() + cv.inner->stored_entries();
  if (merged_) total += merge_map_.size() + merged_host_->stored_entries() + merged_->stored_entries();
  if (split_) total += split_->stored_entries();
  return total;
}

std::size_t ClassIndex::capacity_entries() const {
  std::size_t total = 4 + kept_.size();
  for (Vertex t = 0; t < cw_.graph.n(); ++t)
    if (cw_.source[t].e1 >= 0) total += 2;
  for (const auto& f : families_) total += 2 * static_cast<std::size_t>(popcount(cw_.local)) + f.complements.size();
  for (const Cover& cv : covers_) total += cv.carcass->stored_entries() + cv.inner->capacity_entries();
  if (merged_) total += merge_map_.size() + merged_host_->stored_entries() + merged_->capacity_entries();
  if (split_) total += split_->stored_entries();
  return total;
}

// ---------------------------------------------------------------------------
// MinPlusOneIndex

MinPlusOneIndex MinPlusOneIndex::build(const MultiGraph& g) {
  return build(std::make_shared<const Carcass>(Carcass::build(g)));
}

MinPlusOneIndex MinPlusOneIndex::build(std::shared_ptr<const Carcass> carcass) {
  MinPlusOneIndex idx;
  idx.carcass_ = carcass;
  idx.classes_.resize(carcass->unit_count());
  for (UnitId w = 0; w < carcass->unit_count(); ++w)
    if (popcount(carcass->unit(w).members) > 1) idx.classes_[w] = ClassIndex::build(carcass, w);
  return idx;
}

ClassKind MinPlusOneIndex::class_kind(UnitId w) const { return kind_of(*carcass_, w); }

CutLevel MinPlusOneIndex::query_cut(Vertex u, Vertex v) const {
  const MultiGraph& g = carcass_->graph();
  if (u < 0 || u >= g.n() || v < 0 || v >= g.n()) fail(Errc::InvalidVertex, "vertex out of range");
  if (u == v) fail(Errc::SameVertex, "query needs two vertices");
  probes::add(2);
  UnitId a = carcass_->phi(u), b = carcass_->phi(v);
  if (a != b) return CutLevel::AtLambda;
  probes::add();
  return classes_[a]->separable(u, v) ? CutLevel::AtLambdaPlus1 : CutLevel::Above;
}

Cut MinPlusOneIndex::report_witness(Vertex u, Vertex v, CutLevel level) const {
  if (level == CutLevel::Above) fail(Errc::NoWitness, "no witness above lambda + 1");
  if (query_cut(u, v) != level) fail(Errc::NoWitness, "decision does not hold for this pair");
  if (level == CutLevel::AtLambda) return *carcass_->report_separating_mincut(u, v);
  return make_cut(carcass_->graph(), classes_[carcass_->phi(u)]->witness(u, v));
}

bool MinPlusOneIndex::query_belong(Vertex u, const std::vector<Vertex>& vs) const {
  const MultiGraph& g = carcass_->graph();
  if (u < 0 || u >= g.n()) fail(Errc::InvalidVertex, "vertex out of range");
  UnitId w = carcass_->phi(u);
  for (Vertex v : vs)
    if (v < 0 || v >= g.n() || carcass_->phi(v) != w) fail(Errc::VertexNotInClass, fmt::format("vertex {}", v));
  if (!classes_[w]) {
    if (kind_of(*carcass_, w) == ClassKind::Singleton || kind_of(*carcass_, w) == ClassKind::MultiTerminal) return false;
    fail(Errc::NotAClass, "families are kept for classes with terminals");
  }
  return classes_[w]->belong(u, vs);
}

std::size_t MinPlusOneIndex::stored_entries() const {
  std::size_t total = carcass_->stored_entries();
  for (const auto& c : classes_)
    if (c) total += c->stored_entries();
  return total;
}

}  // namespace sck
