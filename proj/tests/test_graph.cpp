#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "sck/graph.hpp"

namespace sck {
namespace {

using test::k4;
using test::parallel_st;
using test::path3;
using test::triangle;

TEST(Capacity, SpecExamples) {
  EXPECT_EQ(capacity(triangle(), 0b001), 2);
  EXPECT_EQ(capacity(parallel_st(), 0b01), 2);
  EXPECT_EQ(capacity(k4(), 0b0011), 4);
}

TEST(Capacity, RejectsTrivialSides) {
  try {
    capacity(triangle(), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptySide);
  }
  try {
    capacity(triangle(), 0b111);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::FullSide);
  }
}

TEST(ClassifyCut, SpecExamples) {
  EXPECT_TRUE(classify_cut(triangle(), 0b001).steiner);
  EXPECT_FALSE(classify_cut(path3(), 0b101).steiner);
  auto c = classify_cut(k4(), 0b0011, std::pair{0, 2}, VSet{0b0110});
  EXPECT_TRUE(c.subdivides);
  EXPECT_TRUE(c.separates);
}

TEST(Surgery, SpecExamples) {
  auto g = surgery(parallel_st(), {0, 1}, {});
  EXPECT_EQ(g.m(), 0);
  EXPECT_FALSE(g.connected());
  auto h = surgery(path3(), {}, {{0, 2}, {0, 2}});
  EXPECT_EQ(h.m(), 4);
  EXPECT_EQ(h.edges()[2].id, 2);
  EXPECT_EQ(h.edges()[3].id, 3);
  auto k = surgery(k4(), {0, 5}, {});
  for (int v = 0; v < 4; ++v) EXPECT_EQ(k.degree(v), 2);
}

TEST(Surgery, ErrorsAndStableIds) {
  try {
    surgery(path3(), {7}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownEdgeId);
  }
  try {
    surgery(path3(), {}, {{1, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SelfLoopRejected);
  }
  auto g = surgery(k4(), {2}, {{0, 3}});
  EXPECT_FALSE(g.has_edge_id(2));
  EXPECT_EQ(g.edge_by_id(6).u, 0);
  EXPECT_EQ(g.edge_by_id(5).v, 3);
}

TEST(Contract, SpecExamples) {
  auto a = contract(path3(), {0b011});
  EXPECT_EQ(a.graph.n(), 2);
  EXPECT_EQ(a.graph.m(), 1);
  auto b = contract(k4(), {0b0011});
  EXPECT_EQ(b.graph.n(), 3);
  EXPECT_EQ(b.graph.m(), 5);
  auto c = contract(k4(), {});
  EXPECT_EQ(c.graph.n(), 4);
  for (int v = 0; v < 4; ++v) EXPECT_EQ(c.map[v], v);
  EXPECT_EQ(c.graph.m(), 6);
}

TEST(Contract, OverlappingGroups) {
  try {
    contract(k4(), {0b0011, 0b0110});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::OverlappingGroups);
  }
}

TEST(Parse, FormatRoundTrip) {
  auto g = parse_graph_string("# comment\n3 3 2\n0 2\n0 1\n1 2 # tail\n1 2\n");
  EXPECT_EQ(g.n(), 3);
  EXPECT_EQ(g.m(), 3);
  EXPECT_EQ(g.steiner(), VSet{0b101});
  EXPECT_EQ(g.weights(1)[2], 2);
  auto h = parse_graph_string(format_graph(g));
  EXPECT_EQ(h.m(), g.m());
  EXPECT_EQ(h.steiner(), g.steiner());
}

TEST(Parse, RejectsSelfLoops) {
  try {
    parse_graph_string("2 1 2\n0 1\n1 1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SelfLoopRejected);
  }
  EXPECT_THROW(parse_graph_string("2 2 2\n0 1\n0 1\n"), Error);
}

// Undirectedness, submodularity and surgery reversal on random sides.
TEST(CutProperties, RandomSides) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 200; ++round) {
    int n = 3 + static_cast<int>(rng() % 8);
    auto g = test::random_graph(rng, n, static_cast<int>(rng() % 10), 2 + static_cast<int>(rng() % 3));
    VSet full = g.all();
    VSet a = (rng() & full), b = (rng() & full);
    auto proper = [&](VSet s) { return s != 0 && s != full; };
    if (proper(a)) EXPECT_EQ(cut_value(g, a), cut_value(g, full & ~a));
    if (proper(a) && proper(b) && proper(a & b) && proper(a | b))
      EXPECT_GE(cut_value(g, a) + cut_value(g, b), cut_value(g, a & b) + cut_value(g, a | b));
    if (proper(a) && proper(b) && proper(a & ~b) && proper(b & ~a))
      EXPECT_GE(cut_value(g, a) + cut_value(g, b), cut_value(g, a & ~b) + cut_value(g, b & ~a));
    if (g.m() > 0) {
      const Edge e = g.edges()[rng() % g.m()];
      auto h = surgery(surgery(g, {e.id}, {}), {}, {{e.u, e.v}});
      for (VSet s = 1; s < full; ++s) ASSERT_EQ(cut_value(g, s), cut_value(h, s));
    }
  }
}

}  // namespace
}  // namespace sck
