#include "sck/harness.hpp"

#include <algorithm>
#include <random>

#include <fmt/format.h>
#include <json.hpp>

#include "sck/reference.hpp"

namespace sck {

namespace {

// Draw in [0, bound) from the raw engine output.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

EdgeId edge_between(const MultiGraph& g, Vertex a, Vertex b) {
  for (int i : g.incident(a)) {
    const Edge& e = g.edges()[i];
    if ((e.u == a && e.v == b) || (e.u == b && e.v == a)) return e.id;
  }
  fail(Errc::UnknownEdge, fmt::format("no edge {}-{}", a, b));
}

}  // namespace

MultiGraph gen_random(int n, int target_m, int k, std::uint64_t seed) {
  if (n < 2 || n > kMaxVertices || k < 2 || k > n || target_m < n - 1)
    fail(Errc::InfeasibleParameters, fmt::format("n={} m={} k={}", n, target_m, k));
  std::mt19937_64 rng(seed);
  std::vector<Vertex> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[draw(rng, i + 1)]);
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (int i = 1; i < n; ++i) edges.emplace_back(perm[draw(rng, i)], perm[i]);
  while (static_cast<int>(edges.size()) < target_m) {
    const Vertex a = static_cast<Vertex>(draw(rng, n));
    Vertex b = static_cast<Vertex>(draw(rng, n - 1));
    if (b >= a) ++b;
    edges.emplace_back(a, b);
  }
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[draw(rng, i + 1)]);
  VSet terms = 0;
  for (int i = 0; i < k; ++i) terms |= bit(perm[i]);
  return MultiGraph(n, edges, terms);
}

Bipartite random_bipartite(int left, int right, double density, std::uint64_t seed) {
  if (left < 1 || right < 1 || 2 + left + right > kMaxVertices)
    fail(Errc::InfeasibleParameters, fmt::format("{}x{} bipartite graph", left, right));
  std::mt19937_64 rng(seed);
  const auto threshold = static_cast<std::uint64_t>(density * 1024.0);
  Bipartite b{left, right, std::vector<std::uint64_t>(left, 0)};
  for (int u = 0; u < left; ++u)
    for (int v = 0; v < right; ++v)
      if (draw(rng, 1024) < threshold) b.adj[u] |= std::uint64_t{1} << v;
  return b;
}

HardInstance gen_hard_instance(const Bipartite& b) {
  if (b.left < 1 || b.right < 1) fail(Errc::EmptySide, "both sides need a vertex");
  if (2 + b.left + b.right > kMaxVertices) fail(Errc::TooLarge, "hard instance exceeds the vertex limit");
  if (static_cast<int>(b.adj.size()) != b.left) fail(Errc::InfeasibleParameters, "adjacency rows do not match the left side");
  HardInstance hi;
  hi.b = b;
  hi.n = 2 + b.left + b.right;
  auto& a = hi.arcs;
  std::vector<int> indeg(b.right, 0);
  for (int u = 0; u < b.left; ++u) {
    const Vertex x = hi.left_vertex(u);
    const int p = popcount(b.adj[u]);
    for (int i = 0; i < p; ++i) a.emplace_back(HardInstance::s, x);
    for (int v = 0; v < b.right; ++v)
      if (b.edge(u, v)) {
        a.emplace_back(x, hi.right_vertex(v));
        ++indeg[v];
      }
  }
  for (int v = 0; v < b.right; ++v)
    for (int i = 0; i < indeg[v]; ++i) a.emplace_back(hi.right_vertex(v), HardInstance::t);
  for (Vertex x = 2; x < hi.n; ++x) {
    a.emplace_back(HardInstance::s, x);
    a.emplace_back(x, HardInstance::t);
  }
  hi.h = MultiGraph(hi.n, a, bit(HardInstance::s) | bit(HardInstance::t));
  return hi;
}

bool is_balanced(const HardInstance& hi) {
  std::vector<int> in(hi.n, 0), out(hi.n, 0);
  for (auto [x, y] : hi.arcs) {
    ++out[x];
    ++in[y];
  }
  if (in[HardInstance::s] != 0 || out[HardInstance::t] != 0) return false;
  for (Vertex x = 2; x < hi.n; ++x)
    if (in[x] != out[x]) return false;
  return true;
}

Bipartite recover_adjacency(const DualOracle& o, int left, int right) {
  const MultiGraph& g = o.carcass().graph();
  if (left < 1 || right < 1 || 2 + left + right != g.n()) fail(Errc::InfeasibleParameters, "sizes do not match the oracle");
  Bipartite b{left, right, std::vector<std::uint64_t>(left, 0)};
  const int lam = o.lambda();
  for (int u = 0; u < left; ++u) {
    const EdgeId su = edge_between(g, HardInstance::s, 2 + u);
    for (int v = 0; v < right; ++v) {
      const EdgeId vt = edge_between(g, 2 + left + v, HardInstance::t);
      if (lam - o.query_fail_capacity(su, vt) == 1) b.adj[u] |= std::uint64_t{1} << v;
    }
  }
  return b;
}

Bipartite recover_adjacency_by_insertion(const DualOracle& o, int left, int right) {
  const MultiGraph& g = o.carcass().graph();
  if (left < 1 || right < 1 || 2 + left + right != g.n()) fail(Errc::InfeasibleParameters, "sizes do not match the oracle");
  Bipartite b{left, right, std::vector<std::uint64_t>(left, 0)};
  const int lam = o.lambda();
  for (int u = 0; u < left; ++u)
    for (int v = 0; v < right; ++v) {
      const int got = o.query_insert_capacity({HardInstance::s, 2 + left + v}, {2 + u, HardInstance::t});
      if (got - lam == 1) b.adj[u] |= std::uint64_t{1} << v;
    }
  return b;
}

Measurement measure(const DualOracle& o) {
  const MultiGraph& g = o.carcass().graph();
  Measurement m;
  m.n = g.n();
  m.m = g.m();
  m.terminals = popcount(g.steiner());
  m.lambda = o.lambda();
  m.capacity_entries = o.capacity_entries();
  m.full_entries = o.full_entries();
  auto& cut = m.probe_histograms["cut"];
  for (Vertex u = 0; u < g.n(); ++u)
    for (Vertex v = u + 1; v < g.n(); ++v) {
      probes::reset();
      o.minplus1().query_cut(u, v);
      ++cut[probes::read()];
    }
  auto& fl = m.probe_histograms["fail"];
  for (int i = 0; i < g.m(); ++i)
    for (int j = i + 1; j < g.m(); ++j) {
      probes::reset();
      o.query_fail_capacity(g.edges()[i].id, g.edges()[j].id);
      ++fl[probes::read()];
    }
  auto& ins = m.probe_histograms["insert"];
  std::vector<std::pair<Vertex, Vertex>> ends;
  for (Vertex a = 0; a < g.n(); ++a)
    for (Vertex b = a + 1; b < g.n(); ++b) ends.emplace_back(a, b);
  for (std::size_t i = 0; i < ends.size(); ++i)
    for (std::size_t j = i; j < ends.size(); ++j) {
      probes::reset();
      o.query_insert_capacity(ends[i], ends[j]);
      ++ins[probes::read()];
    }
  return m;
}

std::string measurement_json(const Measurement& m) {
  nlohmann::ordered_json j;
  j["n"] = m.n;
  j["m"] = m.m;
  j["terminals"] = m.terminals;
  j["lambda"] = m.lambda;
  j["capacity_only_entries"] = m.capacity_entries;
  j["full_entries"] = m.full_entries;
  nlohmann::ordered_json h = nlohmann::ordered_json::object();
  for (const auto& [kind, hist] : m.probe_histograms) {
    nlohmann::ordered_json k = nlohmann::ordered_json::object();
    for (auto [p, c] : hist) k[std::to_string(p)] = c;
    h[kind] = k;
  }
  j["probe_histograms"] = h;
  return j.dump();
}

std::vector<HardInstance> corpus_hard_instances() {
  std::vector<HardInstance> out;
  for (int i = 0; i < 25; ++i) {
    const int left = i == 24 ? 8 : 1 + i % 8, right = i == 24 ? 8 : 1 + (i * 3) % 8;
    out.push_back(gen_hard_instance(random_bipartite(left, right, 0.45, 1000 + i)));
  }
  return out;
}

std::vector<CorpusEntry> ci_corpus() {
  std::vector<CorpusEntry> out;
  // Small graphs: every size up to six vertices and nine edges, seed sampled.
  std::uint64_t seed = 1;
  for (int n = 2; n <= 6; ++n)
    for (int m = n - 1; m <= 9; ++m)
      for (int k = 2; k <= n; ++k)
        for (int rep = 0; rep < 2; ++rep) out.push_back({"small", gen_random(n, m, k, seed++)});
  // Seeded random graphs up to twelve vertices.
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 500; ++i) {
    const int n = 3 + static_cast<int>(draw(rng, 10));
    const int m = n - 1 + static_cast<int>(draw(rng, 2 * n));
    const int k = 2 + static_cast<int>(draw(rng, n - 1));
    out.push_back({"random", gen_random(n, m, k, 10000 + i)});
  }
  // Paths with terminal ends, cycles, cliques.
  for (int n = 3; n <= 16; ++n) {
    std::vector<std::pair<Vertex, Vertex>> p, c;
    for (int i = 0; i + 1 < n; ++i) p.emplace_back(i, i + 1);
    c = p;
    c.emplace_back(n - 1, 0);
    out.push_back({"path", MultiGraph(n, p, bit(0) | bit(n - 1))});
    out.push_back({"cycle", MultiGraph(n, c, full_set(n))});
    VSet alt = 0;
    for (int i = 0; i < n; i += 2) alt |= bit(i);
    out.push_back({"cycle", MultiGraph(n, c, alt)});
  }
  for (int n = 3; n <= 8; ++n) {
    std::vector<std::pair<Vertex, Vertex>> e;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) e.emplace_back(a, b);
    out.push_back({"clique", MultiGraph(n, e, full_set(n))});
    out.push_back({"clique", MultiGraph(n, e, bit(0) | bit(n - 1))});
  }
  // Sparse many-terminal graphs whose nearest-cut families contain pairs of
  // multi-terminal cuts; seeds found by scanning, rare among random graphs.
  for (std::uint64_t s : {1303, 2011, 5234, 5654, 9865, 12766, 13979, 14609, 14893, 16953, 20983, 21494}) {
    const int n = 7 + static_cast<int>(s % 5);
    const int k = 3 + static_cast<int>((s / 5) % (n - 3));
    const int m = n + static_cast<int>((s / 11) % 6);
    out.push_back({"mcut", gen_random(n, m, k, s)});
  }
  for (const HardInstance& hi : corpus_hard_instances()) out.push_back({"hard", hi.h});
  return out;
}

}  // namespace sck
