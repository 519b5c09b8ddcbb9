#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "sck/dual.hpp"
#include "sck/reference.hpp"

namespace sck {
namespace {

using test::k4;
using test::path3;

std::vector<MultiGraph> dual_corpus() {
  auto out = test::corpus();
  auto dense = test::dense_corpus();
  out.insert(out.end(), dense.begin(), dense.end());
  return out;
}

int fail_reference(const MultiGraph& g, EdgeId e, EdgeId f) { return steiner_lambda(surgery(g, {e, f}, {})); }

int insert_reference(const MultiGraph& g, std::pair<Vertex, Vertex> e, std::pair<Vertex, Vertex> f) {
  return steiner_lambda(surgery(g, {}, {e, f}));
}

TEST(Dual, SpecExamples) {
  auto k = DualOracle::build(k4());
  EXPECT_EQ(k.classify_failure(0, 5).kind, FailureCase::BothCrossing);
  EXPECT_EQ(k.query_fail_capacity(0, 5), 2);
  Cut w = k.query_fail_cut(0, 5);
  EXPECT_EQ(w.capacity, 2);
  EXPECT_EQ(cut_value(surgery(k4(), {0, 5}, {}), w.side), 2);
  EXPECT_EQ(k.single_edge_fail(0).first, 2);
  EXPECT_EQ(k.insertion_plan().shape, InsertionShape::FourCycleOrJunction);
  EXPECT_THROW(k.classify_failure(0, 0), Error);
  EXPECT_THROW(k.classify_failure(0, 99), Error);
  try {
    k.query_fail_capacity(3, 3);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SameEdge);
  }

  auto p = DualOracle::build(path3());
  EXPECT_EQ(p.insertion_plan().shape, InsertionShape::Path);
  EXPECT_EQ(p.query_insert_capacity({0, 2}, {0, 2}), 3);
  Cut c = p.query_insert_cut({0, 2}, {0, 2});
  EXPECT_EQ(c.side, bit(0));
  EXPECT_EQ(c.capacity, 3);
  EXPECT_EQ(p.query_insert_capacity({0, 1}, {1, 2}), 2);
  EXPECT_EQ(p.query_fail_capacity(0, 1), 0);
  EXPECT_EQ(p.single_edge_insert(0, 2).first, 2);
  EXPECT_THROW(p.query_insert_capacity({1, 1}, {0, 2}), Error);

  auto s = DualOracle::build(test::parallel_st());
  EXPECT_EQ(s.matrix().entries(), 0U);
  EXPECT_EQ(s.query_fail_capacity(0, 1), 0);
  Cut d = s.query_fail_cut(0, 1);
  EXPECT_EQ(d.capacity, 0);
  EXPECT_TRUE(d.steiner);
}

TEST(Dual, ClassifyFailure) {
  // Terminals 0 and 3; 1 and 2 form one class with 0 through heavy edges.
  MultiGraph g(4, {{0, 1}, {0, 1}, {0, 1}, {1, 2}, {1, 2}, {1, 2}, {2, 3}, {0, 3}}, 0b1001);
  auto o = DualOracle::build(g);
  EXPECT_EQ(o.classify_failure(0, 3).kind, FailureCase::SameClass);
  EXPECT_EQ(o.classify_failure(0, 6).kind, FailureCase::OneCrossing);
  EXPECT_EQ(o.classify_failure(0, 6).live, 6);
  EXPECT_EQ(o.classify_failure(6, 7).kind, FailureCase::BothCrossing);
  EXPECT_EQ(o.single_edge_fail(0).first, o.lambda());
}

TEST(Dual, SuppressiveShapeKeepsLambda) {
  MultiGraph g = test::cycle(5, full_set(5));
  auto o = DualOracle::build(g);
  EXPECT_EQ(o.insertion_plan().shape, InsertionShape::Suppressive);
  for (Vertex a = 0; a < 5; ++a)
    for (Vertex b = 0; b < 5; ++b)
      for (Vertex c = 0; c < 5; ++c)
        for (Vertex d = 0; d < 5; ++d) {
          if (a == b || c == d) continue;
          EXPECT_EQ(o.query_insert_capacity({a, b}, {c, d}), o.lambda());
        }
  for (VSet q : o.insertion_plan().leaf_sides) EXPECT_EQ(capacity(g, q), o.lambda());
}

TEST(Dual, ExhaustiveFailureEquivalence) {
  std::uint64_t max_probes = 0;
  std::array<int, 4> seen{};
  for (const MultiGraph& g : dual_corpus()) {
    auto o = DualOracle::build(g);
    for (int i = 0; i < g.m(); ++i)
      for (int j = i + 1; j < g.m(); ++j) {
        const EdgeId e = g.edges()[i].id, f = g.edges()[j].id;
        const int want = fail_reference(g, e, f);
        probes::reset();
        const int got = o.query_fail_capacity(e, f);
        max_probes = std::max(max_probes, probes::read());
        ++seen[static_cast<int>(o.classify_failure(e, f).kind)];
        ASSERT_EQ(got, want) << format_graph(g) << "fail " << e << " " << f;
        Cut c = o.query_fail_cut(e, f);
        const MultiGraph h = surgery(g, {e, f}, {});
        EXPECT_EQ(cut_value(h, c.side), want);
        EXPECT_TRUE(classify_cut(h, c.side).steiner);
      }
    for (const Edge& e : g.edges()) {
      auto [cap, cut] = o.single_edge_fail(e.id);
      const MultiGraph h = surgery(g, {e.id}, {});
      EXPECT_EQ(cap, steiner_lambda(h));
      EXPECT_EQ(cut_value(h, cut.side), cap);
    }
  }
  for (int k = 0; k < 4; ++k) EXPECT_GT(seen[k], 0) << failure_case_name(static_cast<FailureCase>(k));
  EXPECT_LE(max_probes, 512U);
}

void check_insert(const DualOracle& o, const MultiGraph& g, std::pair<Vertex, Vertex> e, std::pair<Vertex, Vertex> f,
                  std::uint64_t& max_probes) {
  const int want = insert_reference(g, e, f);
  probes::reset();
  const int got = o.query_insert_capacity(e, f);
  max_probes = std::max(max_probes, probes::read());
  ASSERT_EQ(got, want) << format_graph(g) << "insert " << e.first << "-" << e.second << " " << f.first << "-"
                       << f.second;
  Cut c = o.query_insert_cut(e, f);
  const MultiGraph h = surgery(g, {}, {e, f});
  EXPECT_EQ(cut_value(h, c.side), want);
  EXPECT_TRUE(classify_cut(h, c.side).steiner);
}

TEST(Dual, ExhaustiveInsertionEquivalence) {
  std::uint64_t max_probes = 0;
  std::mt19937_64 rng(3);
  std::array<int, 3> delta{};
  for (const MultiGraph& g : dual_corpus()) {
    auto o = DualOracle::build(g);
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (Vertex a = 0; a < g.n(); ++a)
      for (Vertex b = a + 1; b < g.n(); ++b) pairs.emplace_back(a, b);
    if (g.n() <= 8) {
      for (size_t i = 0; i < pairs.size(); ++i)
        for (size_t j = i; j < pairs.size(); ++j) {
          check_insert(o, g, pairs[i], pairs[j], max_probes);
          ++delta[o.query_insert_capacity(pairs[i], pairs[j]) - o.lambda()];
        }
    } else {
      for (int t = 0; t < 300; ++t)
        check_insert(o, g, pairs[rng() % pairs.size()], pairs[rng() % pairs.size()], max_probes);
    }
    for (auto [a, b] : pairs) {
      auto [cap, cut] = o.single_edge_insert(a, b);
      const MultiGraph h = surgery(g, {}, {{a, b}});
      EXPECT_EQ(cap, steiner_lambda(h));
      EXPECT_EQ(cut_value(h, cut.side), cap);
    }
  }
  for (int d : delta) EXPECT_GT(d, 0);
  EXPECT_LE(max_probes, 4096U);
}

// Nearest mincut membership agrees with flows for every bunch both units
// are stretched across.
TEST(Dual, MatrixMatchesFlows) {
  int checked = 0;
  for (const MultiGraph& g : dual_corpus()) {
    auto c = Carcass::build(g);
    auto m = NearestMincutMatrix::build(c);
    for (MinimalCut k : c.minimal_cuts())
      for (UnitId v = 0; v < c.unit_count(); ++v) {
        if (c.side_of(c.projection(v), k) != Side::Stretched) continue;
        for (bool fs : {false, true}) {
          FlowResult r = max_flow_mincut(g, c.tight_side(k, fs) | c.unit(v).members, c.tight_side(k, !fs));
          ASSERT_EQ(r.value, c.lambda());
          for (UnitId w = 0; w < c.unit_count(); ++w) {
            if (c.side_of(c.projection(w), k) != Side::Stretched) continue;
            EXPECT_EQ(m.member(c, v, w, k, fs), has(r.min_source_side, lowest(c.unit(w).members)))
                << format_graph(g);
            ++checked;
          }
        }
      }
  }
  EXPECT_GT(checked, 0);
}

// Every singleton structure reachable from an oracle.
template <class F>
void for_each_singleton(const DualOracle& o, F&& f) {
  const Carcass& c = o.carcass();
  for (UnitId w = 0; w < c.unit_count(); ++w) {
    const ClassIndex* ci = o.minplus1().class_index(w);
    if (!ci) continue;
    switch (ci->kind()) {
      case ClassKind::Singleton: f(*ci); break;
      case ClassKind::MultiTerminal: f(*ci->merged()); break;
      default:
        for (int i = 0; i < ci->cover_count(); ++i) f(ci->cover_class(i));
    }
  }
}

// Labels are sound: a label lies outside its cut, and equal labels imply a
// joint terminal. Unlabeled cuts and the converse direction are counted, not
// required; the oracle checks joint terminals on the stored complements.
TEST(Dual, SteinerLabelInvariants) {
  LabelAudit total;
  for (const MultiGraph& g : dual_corpus()) {
    const LabelAudit a = audit_labels(DualOracle::build(g));
    EXPECT_EQ(a.unsound, 0U) << format_graph(g);
    EXPECT_EQ(a.label_no_joint, 0U) << format_graph(g);
    total.structures += a.structures;
    total.cuts += a.cuts;
    total.pairs += a.pairs;
    total.unlabeled += a.unlabeled;
    total.joint_unlabeled += a.joint_unlabeled;
  }
  EXPECT_GT(total.structures, 0U);
  EXPECT_GT(total.pairs, 0U);
  RecordProperty("unlabeled", std::to_string(total.unlabeled) + "/" + std::to_string(total.cuts));
  RecordProperty("joint_unlabeled", std::to_string(total.joint_unlabeled) + "/" + std::to_string(total.pairs));
}

// Greedy in ascending terminal order leaves a cut unlabeled: the first pick
// removes every terminal outside the middle cut from the pool.
TEST(Dual, GreedyLabelsCanMissACut) {
  // Class graph with terminals {0,1,3}, class {1,2}, terminal 1.
  MultiGraph gw(4, {{0, 1}, {1, 2}, {1, 3}, {2, 0}, {2, 3}}, 0b1011);
  auto L = construct_sstar(gw, 0b0110, 1, 3, [&] {
    std::vector<VSet> v;
    for (VSet c : cuts_containing(gw, 1, 3))
      if (0b0110 & ~c) v.push_back(c);
    return v;
  }());
  ASSERT_EQ(L.cuts.size(), 3U);
  EXPECT_EQ(std::count(L.label.begin(), L.label.end(), -1), 1);
}

// For an edge of a class crossing two crossing (lambda+1) cuts C, C' of the
// class graph: neither C \ C' nor C' \ C holds a class vertex iff each holds a
// terminal of the class graph.
TEST(Dual, CrossingCutsAroundAnEdge) {
  int checked = 0;
  for (const MultiGraph& g : dual_corpus()) {
    auto o = DualOracle::build(g);
    for_each_singleton(o, [&](const ClassIndex& ci) {
      const MultiGraph& gw = ci.class_graph().graph;
      const VSet W = ci.class_graph().local;
      const SteinerLabels* L = o.labels(&ci);
      for (const Edge& e : gw.edges()) {
        if (!has(W, e.u) || !has(W, e.v)) continue;
        for (size_t i = 0; i < L->cuts.size(); ++i)
          for (size_t j = i + 1; j < L->cuts.size(); ++j) {
            const VSet c1 = L->cuts[i], c2 = L->cuts[j];
            const VSet all = gw.all();
            auto crosses = [&](VSet c) { return has(c, e.u) != has(c, e.v); };
            if (!crosses(c1) || !crosses(c2)) continue;
            // Same orientation with respect to the edge.
            if (has(c1, e.u) != has(c2, e.u)) continue;
            if (!(c1 & ~c2) || !(c2 & ~c1) || !(c1 & c2) || !(all & ~(c1 | c2))) continue;
            const bool no_class = !((c1 & ~c2) & W) && !((c2 & ~c1) & W);
            const bool terms = ((c1 & ~c2) & gw.steiner()) && ((c2 & ~c1) & gw.steiner());
            EXPECT_EQ(no_class, terms) << format_graph(g);
            ++checked;
          }
      }
    });
  }
  EXPECT_GT(checked, 0);
}

TEST(Dual, ConstructSstar) {
  // lambda = 3; the only 4-cut splitting {0,1} is {0}.
  MultiGraph g(3, {{0, 1}, {0, 1}, {0, 1}, {1, 2}, {1, 2}, {0, 2}}, 0b101);
  const VSet W = 0b011;
  std::vector<VSet> sub;
  for (VSet c : cuts_containing(g, 0, 4))
    if (W & ~c) sub.push_back(c);
  ASSERT_EQ(sub.size(), 1U);
  auto L = construct_sstar(g, W, 0, 4, sub);
  EXPECT_EQ(L.sstar, std::vector<Vertex>{2});
  EXPECT_EQ(L.label_of(sub[0]), 2);
  sub.pop_back();
  try {
    construct_sstar(g, W, 0, 4, sub);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IncompleteFamily);
  }
}

TEST(Dual, FootprintRegression) {
  // Constants fitted on n = 8 instances.
  double cap_c = 0, full_c = 0;
  std::mt19937_64 rng(17);
  for (int k = 2; k <= 8; ++k)
    for (int t = 0; t < 10; ++t) {
      MultiGraph g = test::random_graph(rng, 8, static_cast<int>(rng() % 12), k);
      auto o = DualOracle::build(g);
      const int s = popcount(g.steiner());
      cap_c = std::max(cap_c, double(o.capacity_entries()) / ((8 - s) * (8 - s) + 8));
      full_c = std::max(full_c, double(o.full_entries()) / (8 * (8 - s + 1)));
    }
  cap_c *= 1.5;
  full_c *= 1.5;
  for (const MultiGraph& g : dual_corpus()) {
    auto o = DualOracle::build(g);
    const int n = g.n(), s = popcount(g.steiner());
    EXPECT_LE(double(o.capacity_entries()), cap_c * ((n - s) * (n - s) + n)) << format_graph(g);
    EXPECT_LE(double(o.full_entries()), full_c * n * (n - s + 1)) << format_graph(g);
  }
}

}  // namespace
}  // namespace sck
