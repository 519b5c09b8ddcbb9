#pragma once

#include <algorithm>
#include <climits>
#include <random>
#include <vector>

#include "sck/graph.hpp"

namespace sck::test {

inline MultiGraph triangle() { return MultiGraph(3, {{0, 1}, {1, 2}, {0, 2}}, 0b111); }

inline MultiGraph k4() { return MultiGraph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, 0b1111); }

inline MultiGraph path3() { return MultiGraph(3, {{0, 1}, {1, 2}}, 0b101); }

inline MultiGraph parallel_st() { return MultiGraph(2, {{0, 1}, {0, 1}}, 0b11); }

inline MultiGraph cycle(int n, VSet terms) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return MultiGraph(n, e, terms);
}

// Small random connected multigraph for property tests.
inline MultiGraph random_graph(std::mt19937_64& rng, int n, int extra, int k) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (int v = 1; v < n; ++v) e.emplace_back(std::uniform_int_distribution<int>(0, v - 1)(rng), v);
  for (int i = 0; i < extra; ++i) {
    int a = std::uniform_int_distribution<int>(0, n - 1)(rng);
    int b = std::uniform_int_distribution<int>(0, n - 2)(rng);
    if (b >= a) ++b;
    e.emplace_back(a, b);
  }
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  VSet terms = 0;
  for (int i = 0; i < std::max(2, std::min(k, n)); ++i) terms |= bit(perm[i]);
  return MultiGraph(n, e, terms);
}

// Brute force over all sides; independent of the flow code.
inline int brute_lambda(const MultiGraph& g) {
  int best = INT_MAX;
  for (VSet s = 1; s < full_set(g.n()); ++s)
    if ((s & g.steiner()) && (g.steiner() & ~s)) best = std::min(best, cut_value(g, s));
  return best;
}

inline int brute_separating(const MultiGraph& g, Vertex u, Vertex v) {
  int best = INT_MAX;
  for (VSet s = 1; s < full_set(g.n()); ++s)
    if ((s & g.steiner()) && (g.steiner() & ~s) && has(s, u) != has(s, v)) best = std::min(best, cut_value(g, s));
  return best;
}

}  // namespace sck::test

namespace sck::test {

// Ring of small clusters joined by single edges, with random extra chords and
// terminals; produces cycles and stretched classes in the skeleton.
inline MultiGraph ring_graph(std::mt19937_64& rng, int clusters, int max_size, int chords, int k) {
  std::vector<std::pair<Vertex, Vertex>> e;
  std::vector<int> first;
  int n = 0;
  for (int c = 0; c < clusters; ++c) {
    int sz = 1 + static_cast<int>(rng() % max_size);
    first.push_back(n);
    for (int i = 1; i < sz; ++i) {
      e.emplace_back(n + i - 1, n + i);
      e.emplace_back(n + i - 1, n + i);
    }
    n += sz;
  }
  first.push_back(n);
  for (int c = 0; c < clusters; ++c) {
    int a = first[c] + static_cast<int>(rng() % (first[c + 1] - first[c]));
    int d = (c + 1) % clusters;
    int b = first[d] + static_cast<int>(rng() % (first[d + 1] - first[d]));
    if (a != b) e.emplace_back(a, b);
  }
  for (int i = 0; i < chords; ++i) {
    int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
    if (a != b) e.emplace_back(a, b);
  }
  VSet terms = 0;
  while (popcount(terms) < std::max(2, std::min(k, n))) terms |= bit(static_cast<int>(rng() % n));
  return MultiGraph(n, e, terms);
}

// Shared property-test corpus: small named graphs, cycles, random graphs and
// rings of clusters.
inline std::vector<MultiGraph> corpus() {
  std::vector<MultiGraph> out{parallel_st(), path3(), k4(), triangle()};
  for (int n = 4; n <= 7; ++n) out.push_back(cycle(n, full_set(n)));
  out.push_back(cycle(6, 0b010101));
  out.push_back(cycle(8, 0b10011001));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 60; ++i) {
    int n = 3 + static_cast<int>(rng() % 8);
    out.push_back(random_graph(rng, n, static_cast<int>(rng() % 8), 2 + static_cast<int>(rng() % 5)));
  }
  for (int i = 0; i < 60; ++i)
    out.push_back(ring_graph(rng, 4 + static_cast<int>(rng() % 3), 3, static_cast<int>(rng() % 2),
                             3 + static_cast<int>(rng() % 5)));
  return out;
}

// Denser graphs whose classes have larger internal connectivity.
inline std::vector<MultiGraph> dense_corpus() {
  std::vector<MultiGraph> out;
  std::mt19937_64 rng(11);
  for (int i = 0; i < 40; ++i) {
    int n = 5 + static_cast<int>(rng() % 6);
    out.push_back(random_graph(rng, n, 2 * n + static_cast<int>(rng() % (2 * n)), 2 + static_cast<int>(rng() % 3)));
  }
  return out;
}

}  // namespace sck::test
