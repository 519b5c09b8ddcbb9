#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "sck/carcass.hpp"
#include "sck/pqdag.hpp"
#include "sck/reference.hpp"

namespace sck {
namespace {

using test::k4;
using test::parallel_st;
using test::path3;

std::vector<MultiGraph> carcass_corpus() { return test::corpus(); }

TEST(Carcass, SpecExamples) {
  auto p = Carcass::build(path3());
  EXPECT_EQ(p.node_count(), 2);  // unit {1} is stretched across the only bunch
  EXPECT_EQ(p.tree_edge_count(), 1);
  EXPECT_TRUE(p.unit(p.phi(1)).stretched);

  auto st = Carcass::build(parallel_st());
  EXPECT_EQ(st.node_count(), 2);
  EXPECT_EQ(st.edges().size(), 1u);

  auto k = Carcass::build(k4());
  std::set<VSet> parts;
  for (auto c : k.minimal_cuts()) parts.insert(k.terminal_side(c));
  EXPECT_EQ(parts, (std::set<VSet>{0b0010, 0b0100, 0b1000, 0b1110}));
  int terminal_nodes = 0;
  for (NodeId x = 0; x < k.node_count(); ++x) terminal_nodes += k.node_terminals(x) ? 1 : 0;
  EXPECT_EQ(terminal_nodes, 4);
}

TEST(Carcass, TightCutExamples) {
  auto p = Carcass::build(path3());
  MinimalCut e{0, -1};
  NodeId left = p.terminal_location(0);
  EXPECT_EQ(p.report_tight_cut(left, e).side, VSet{0b001});
  EXPECT_EQ(p.report_tight_cut(p.terminal_location(2), e).side, VSet{0b100});
  auto st = Carcass::build(parallel_st());
  EXPECT_EQ(st.report_tight_cut(st.terminal_location(0), {0, -1}).side, VSet{0b01});
  auto k = Carcass::build(k4());
  NodeId n0 = k.terminal_location(0);
  for (auto c : k.minimal_cuts())
    if (k.terminal_side(c) == 0b1110) EXPECT_EQ(k.report_tight_cut(n0, c).side, VSet{0b0001});
  try {
    k.report_tight_cut(n0, {0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidMinimalCut);
  }
}

TEST(Carcass, SeparatingExamples) {
  auto p = Carcass::build(path3());
  auto c = p.report_separating_mincut(0, 2);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->capacity, 1);
  EXPECT_NE(has(c->side, 0), has(c->side, 2));
  auto k = Carcass::build(k4());
  auto d = k.report_separating_mincut(0, 1);
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(d->capacity, 3);
  EXPECT_EQ(popcount(d->side) == 1 || popcount(d->side) == 3, true);
  EXPECT_THROW(k.report_separating_mincut(2, 2), Error);
}

TEST(Carcass, EdgeProjectionExamples) {
  auto st = Carcass::build(parallel_st());
  auto pe = st.edge_projection(0);
  EXPECT_EQ(st.path_edges(pe), std::vector<int>{0});
  auto p = Carcass::build(path3());
  EXPECT_EQ(p.path_edges(p.edge_projection(0)), std::vector<int>{0});
  MultiGraph g(3, {{0, 1}, {0, 1}, {1, 2}, {1, 2}}, 0b011);
  auto c = Carcass::build(g);
  try {
    c.edge_projection(2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IntraUnitEdge);
  }
}

TEST(Carcass, FourCycleIntersection) {
  // Cycle of four terminals: the skeleton is one 4-cycle.
  auto c = Carcass::build(test::cycle(4, 0b1111));
  ASSERT_EQ(c.cycles().size(), 1u);
  const auto& cy = c.cycles()[0];
  // Two paths that each use one different edge of the cycle.
  ProperPath p1{std::min(cy.nodes[0], cy.nodes[1]), std::max(cy.nodes[0], cy.nodes[1])};
  ProperPath p2{std::min(cy.nodes[1], cy.nodes[2]), std::max(cy.nodes[1], cy.nodes[2])};
  auto r = c.path_intersection(p1, p2);
  EXPECT_EQ(r.kind, IntersectionKind::SharedCyclePair);
  EXPECT_NE(r.edge, r.edge2);
  auto same = c.path_intersection(p1, p1);
  EXPECT_EQ(same.kind, IntersectionKind::SharedEdge);
  ProperPath bad{std::min(cy.nodes[0], cy.nodes[2]), std::max(cy.nodes[0], cy.nodes[2])};
  EXPECT_THROW(c.path_intersection(bad, p1), Error);
}

TEST(Carcass, DisjointSubtrees) {
  auto k = Carcass::build(k4());
  NodeId a = k.terminal_location(1), b = k.terminal_location(2);
  auto r = k.path_intersection({a, a}, {b, b});
  EXPECT_EQ(r.kind, IntersectionKind::Disjoint);
}

// Node and edge sets of a proper path, by walking the block tree.
struct PathSets {
  std::set<NodeId> nodes;
  std::set<int> edges;
};

PathSets walk(const Carcass& c, ProperPath p) {
  PathSets s;
  int l = c.lca(p.a, p.b);
  for (int x : {p.a, p.b})
    for (int y = x;; y = c.parent(y)) {
      if (!c.is_hub(y)) s.nodes.insert(y);
      if (y == l) break;
    }
  for (int e : c.path_edges(p)) s.edges.insert(e);
  return s;
}

TEST(CarcassProperties, CorpusInvariants) {
  for (const MultiGraph& g : carcass_corpus()) {
    SCOPED_TRACE(format_graph(g));
    Carcass c;
    try {
      c = Carcass::build(g);
    } catch (const Error& e) {
      FAIL() << e.what() << "\n" << format_graph(g);
    }
    const auto fam = cut_family(g);
    const VSet S = g.steiner();

    // Skeleton minimal cuts realise exactly the bunches.
    std::set<VSet> want, got;
    for (const Cut& m : fam.mincuts) {
      VSet a = m.side & S;
      want.insert(has(a, c.s0()) ? S & ~a : a);
    }
    for (auto k : c.minimal_cuts()) got.insert(c.terminal_side(k));
    ASSERT_EQ(want, got);

    // Degree sum, cycle shape.
    int deg = 0;
    for (NodeId x = 0; x < c.node_count(); ++x) deg += c.skeleton_degree(x);
    ASSERT_LE(deg, 6 * popcount(S));
    for (const auto& cy : c.cycles()) {
      ASSERT_GE(cy.nodes.size(), 4u);
      for (NodeId x : cy.nodes) {
        ASSERT_EQ(c.node_terminals(x), VSet{0});
        ASSERT_GE(c.skeleton_degree(x), 3);
      }
    }

    // Classes match the reference; stretched iff some bunch leaves it
    // strictly between its tight sides.
    ASSERT_EQ(c.unit_count(), static_cast<int>(connectivity_classes(g).size()));
    for (UnitId u = 0; u < c.unit_count(); ++u) {
      VSet mem = c.unit(u).members;
      bool between = false;
      for (auto k : c.minimal_cuts()) {
        VSet a = c.terminal_side(k);
        VSet t1 = tight_cut(g, a).side, t2 = tight_cut(g, S & ~a).side;
        if ((mem & t1) == 0 && (mem & t2) == 0) between = true;
      }
      ASSERT_EQ(between, c.unit(u).stretched);
      if (c.unit(u).steiner) ASSERT_FALSE(c.unit(u).stretched);
    }

    // Tight cuts match the reference on both sides of every bunch.
    for (auto k : c.minimal_cuts()) {
      VSet a = c.terminal_side(k);
      ASSERT_EQ(c.tight_side(k, true), tight_cut(g, a).side);
      ASSERT_EQ(c.tight_side(k, false), tight_cut(g, S & ~a).side);
    }

    // Node-relative tight cuts.
    for (auto k : c.minimal_cuts())
      for (NodeId x = 0; x < c.node_count(); ++x) {
        if (!c.node_terminals(x)) continue;
        VSet a = c.terminal_side(k);
        VSet mine = c.far(x, k) ? a : S & ~a;
        ASSERT_EQ(c.report_tight_cut(x, k).side, tight_cut(g, mine).side);
      }

    // Every prefix of a stored order is a mincut of its bunch.
    for (const TauGroup& tg : c.tau_groups()) {
      VSet src = c.tight_side(tg.cut, tg.far_is_source);
      std::set<int> levels;
      for (auto [u, pos] : tg.positions) levels.insert(pos);
      for (int lv : levels) {
        VSet side = src;
        for (auto [u, pos] : tg.positions)
          if (pos <= lv) side |= c.unit(u).members;
        ASSERT_EQ(cut_value(g, side), fam.lambda_S);
      }
      for (auto [u, pos] : tg.positions) ASSERT_EQ(c.side_of(c.projection(u), tg.cut), Side::Stretched);
    }

    // Separating mincuts for every vertex pair.
    for (Vertex u = 0; u < g.n(); ++u)
      for (Vertex v = u + 1; v < g.n(); ++v) {
        auto r = c.report_separating_mincut(u, v);
        ASSERT_EQ(r.has_value(), c.phi(u) != c.phi(v));
        if (r) {
          ASSERT_TRUE(r->steiner);
          ASSERT_EQ(r->capacity, fam.lambda_S);
          ASSERT_NE(has(r->side, u), has(r->side, v));
        }
      }

    // Path intersection against explicit node and edge sets.
    std::vector<ProperPath> paths;
    for (NodeId x = 0; x < c.node_count(); ++x)
      for (NodeId y = x; y < c.node_count(); ++y)
        if (c.is_proper_path({x, y})) paths.push_back({x, y});
    for (size_t i = 0; i < paths.size(); ++i)
      for (size_t j = 0; j < paths.size(); ++j) {
        auto s1 = walk(c, paths[i]), s2 = walk(c, paths[j]);
        std::map<int, std::pair<int, int>> per_cycle;
        for (int e : s1.edges)
          if (c.edges()[e].cycle >= 0) per_cycle[c.edges()[e].cycle].first = e + 1;
        for (int e : s2.edges)
          if (c.edges()[e].cycle >= 0) per_cycle[c.edges()[e].cycle].second = e + 1;
        IntersectionKind want_kind = IntersectionKind::Disjoint;
        bool common_node = false, common_edge = false, pair = false;
        for (NodeId x : s1.nodes) common_node = common_node || s2.nodes.count(x);
        for (int e : s1.edges) common_edge = common_edge || s2.edges.count(e);
        for (auto& [cy, ee] : per_cycle) pair = pair || (ee.first && ee.second && ee.first != ee.second);
        if (pair) want_kind = IntersectionKind::SharedCyclePair;
        else if (common_edge) want_kind = IntersectionKind::SharedEdge;
        else if (common_node) want_kind = IntersectionKind::SingleNode;
        auto r = c.path_intersection(paths[i], paths[j]);
        ASSERT_EQ(r.kind, want_kind) << i << " " << j;
        if (r.kind == IntersectionKind::SharedEdge) {
          ASSERT_TRUE(s1.edges.count(r.edge) && s2.edges.count(r.edge));
        } else if (r.kind == IntersectionKind::SharedCyclePair) {
          ASSERT_TRUE(s1.edges.count(r.edge) && s2.edges.count(r.edge2));
          ASSERT_EQ(c.edges()[r.edge].cycle, c.edges()[r.edge2].cycle);
          ASSERT_NE(r.edge, r.edge2);
        } else if (r.kind == IntersectionKind::SingleNode) {
          ASSERT_TRUE(s1.nodes.count(r.node) && s2.nodes.count(r.node));
        }
      }

    // Outward tight cuts of distinct cycle nodes are disjoint.
    for (const auto& cy : c.cycles()) {
      const int k = static_cast<int>(cy.nodes.size());
      VSet seen = 0;
      for (int i = 0; i < k; ++i) {
        int e = cy.edges[(i + k - 1) % k], f = cy.edges[i];
        MinimalCut mc{std::min(e, f), std::max(e, f)};
        VSet t = c.tight_side(mc, i != 0);
        ASSERT_EQ(t & seen, VSet{0});
        seen |= t;
      }
    }
  }
}

TEST(PQDag, ClosedSetsAreMinimumCuts) {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 80; ++round) {
    int n = 3 + static_cast<int>(rng() % 8);
    auto g = test::random_graph(rng, n, static_cast<int>(rng() % 10), 2);
    Vertex s = lowest(g.steiner()), t = lowest(g.steiner() & ~bit(s));
    PQDag d = build_pq_dag(g, bit(s), bit(t));
    int best = INT_MAX;
    for (VSet side = 1; side < g.all(); ++side)
      if (has(side, s) && !has(side, t)) best = std::min(best, cut_value(g, side));
    ASSERT_EQ(best, d.value);
    for (VSet side = 1; side < g.all(); ++side) {
      if (!has(side, s) || has(side, t)) continue;
      ASSERT_EQ(cut_value(g, side) == best, d.is_closed(side)) << side;
    }
    // Prefixes of the stored order between source and sink are closed.
    VSet pre = 0;
    for (size_t i = 0; i + 1 < d.order.size(); ++i) {
      pre |= d.comps[d.order[i]];
      if (static_cast<int>(i) >= d.position[d.source] && i < static_cast<size_t>(d.position[d.sink]))
        ASSERT_TRUE(d.is_closed(pre));
    }
  }
}

}  // namespace
}  // namespace sck
