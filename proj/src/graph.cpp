#include "sck/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace sck {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::EmptySide: return "EmptySide";
    case Errc::FullSide: return "FullSide";
    case Errc::UnknownEdgeId: return "UnknownEdgeId";
    case Errc::SelfLoopRejected: return "SelfLoopRejected";
    case Errc::OverlappingGroups: return "OverlappingGroups";
    case Errc::OverlappingTerminals: return "OverlappingTerminals";
    case Errc::NotEnoughTerminals: return "NotEnoughTerminals";
    case Errc::SameVertex: return "SameVertex";
    case Errc::TooLarge: return "TooLarge";
    case Errc::NotABunch: return "NotABunch";
    case Errc::TooLargeForConstruction: return "TooLargeForConstruction";
    case Errc::NotAProperPath: return "NotAProperPath";
    case Errc::InvalidMinimalCut: return "InvalidMinimalCut";
    case Errc::IntraUnitEdge: return "IntraUnitEdge";
    case Errc::NotAClass: return "NotAClass";
    case Errc::VertexNotInClass: return "VertexNotInClass";
    case Errc::KTooLargeForSmallMincut: return "KTooLargeForSmallMincut";
    case Errc::NoWitness: return "NoWitness";
    case Errc::ClassHasTerminal: return "ClassHasTerminal";
    case Errc::UnknownEdge: return "UnknownEdge";
    case Errc::SameEdge: return "SameEdge";
    case Errc::IncompleteFamily: return "IncompleteFamily";
    case Errc::InfeasibleParameters: return "InfeasibleParameters";
    case Errc::InvalidVertex: return "InvalidVertex";
    case Errc::Disconnected: return "Disconnected";
    case Errc::ParseError: return "ParseError";
    case Errc::BadIndex: return "BadIndex";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(what.empty() ? std::string(errc_name(code))
                                      : fmt::format("{}: {}", errc_name(code), what)),
      code_(code) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

std::vector<Vertex> members(VSet s) {
  std::vector<Vertex> out;
  out.reserve(popcount(s));
  for_each_vertex(s, [&](int v) { out.push_back(v); });
  return out;
}

VSet make_set(const std::vector<Vertex>& vs) {
  VSet s = 0;
  for (Vertex v : vs) s |= bit(v);
  return s;
}

MultiGraph::MultiGraph(int n, const std::vector<std::pair<Vertex, Vertex>>& edges, VSet steiner)
    : n_(n), steiner_(steiner) {
  edges_.reserve(edges.size());
  for (const auto& [u, v] : edges) edges_.push_back({static_cast<EdgeId>(edges_.size()), u, v});
  index();
}

MultiGraph MultiGraph::with_ids(int n, std::vector<Edge> edges, VSet steiner) {
  MultiGraph g;
  g.n_ = n;
  g.steiner_ = steiner;
  g.edges_ = std::move(edges);
  g.index();
  return g;
}

void MultiGraph::index() {
  if (n_ < 1 || n_ > kMaxVertices) fail(Errc::TooLarge, fmt::format("n={} outside 1..{}", n_, kMaxVertices));
  if (steiner_ & ~all()) fail(Errc::InvalidVertex, "terminal out of range");
  incident_.assign(n_, {});
  weights_.assign(n_, std::vector<int>(n_, 0));
  next_id_ = 0;
  for (const Edge& e : edges_) next_id_ = std::max(next_id_, e.id + 1);
  id_index_.assign(next_id_, -1);
  for (int i = 0; i < m(); ++i) {
    const Edge& e = edges_[i];
    if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_) fail(Errc::InvalidVertex, fmt::format("edge {}", e.id));
    if (e.u == e.v) fail(Errc::SelfLoopRejected, fmt::format("edge {} at vertex {}", e.id, e.u));
    if (e.id < 0 || id_index_[e.id] != -1) fail(Errc::UnknownEdgeId, fmt::format("duplicate id {}", e.id));
    id_index_[e.id] = i;
    incident_[e.u].push_back(i);
    incident_[e.v].push_back(i);
    ++weights_[e.u][e.v];
    ++weights_[e.v][e.u];
  }
}

bool MultiGraph::has_edge_id(EdgeId id) const {
  return id >= 0 && id < static_cast<int>(id_index_.size()) && id_index_[id] >= 0;
}

int MultiGraph::index_of(EdgeId id) const {
  if (!has_edge_id(id)) fail(Errc::UnknownEdgeId, fmt::format("edge id {}", id));
  return id_index_[id];
}

const Edge& MultiGraph::edge_by_id(EdgeId id) const { return edges_[index_of(id)]; }

bool MultiGraph::connected() const {
  VSet seen = bit(0);
  std::vector<Vertex> stack{0};
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (int i : incident_[v]) {
      Vertex w = edges_[i].u == v ? edges_[i].v : edges_[i].u;
      if (!has(seen, w)) {
        seen |= bit(w);
        stack.push_back(w);
      }
    }
  }
  return seen == all();
}

MultiGraph MultiGraph::with_steiner(VSet steiner) const { return with_ids(n_, edges_, steiner); }

int cut_value(const MultiGraph& g, VSet side) {
  int c = 0;
  for (const Edge& e : g.edges()) c += has(side, e.u) != has(side, e.v);
  return c;
}

int capacity(const MultiGraph& g, VSet side) {
  side &= g.all();
  if (side == 0) fail(Errc::EmptySide);
  if (side == g.all()) fail(Errc::FullSide);
  return cut_value(g, side);
}

Cut make_cut(const MultiGraph& g, VSet side) {
  Cut c;
  c.side = side;
  c.capacity = capacity(g, side);
  c.steiner = (side & g.steiner()) != 0 && (g.steiner() & ~side) != 0;
  return c;
}

VSet canonical(VSet side, int n) { return has(side, 0) ? full_set(n) & ~side : side; }

CutClassification classify_cut(const MultiGraph& g, VSet side, std::optional<std::pair<Vertex, Vertex>> pair,
                               std::optional<VSet> x) {
  side &= g.all();
  if (side == 0) fail(Errc::EmptySide);
  if (side == g.all()) fail(Errc::FullSide);
  CutClassification r;
  r.steiner = (side & g.steiner()) != 0 && (g.steiner() & ~side) != 0;
  if (pair) r.separates = has(side, pair->first) != has(side, pair->second);
  if (x) r.subdivides = (*x & side) != 0 && (*x & ~side) != 0;
  return r;
}

MultiGraph surgery(const MultiGraph& g, const std::vector<EdgeId>& remove,
                   const std::vector<std::pair<Vertex, Vertex>>& add) {
  std::vector<bool> drop(g.m(), false);
  for (EdgeId id : remove) {
    if (!g.has_edge_id(id)) fail(Errc::UnknownEdgeId, fmt::format("edge id {}", id));
    drop[g.index_of(id)] = true;
  }
  std::vector<Edge> out;
  for (int i = 0; i < g.m(); ++i)
    if (!drop[i]) out.push_back(g.edges()[i]);
  EdgeId next = g.next_edge_id();
  for (const auto& [u, v] : add) {
    if (u < 0 || u >= g.n() || v < 0 || v >= g.n()) fail(Errc::InvalidVertex, "added edge endpoint");
    if (u == v) fail(Errc::SelfLoopRejected, fmt::format("added edge at vertex {}", u));
    out.push_back({next++, u, v});
  }
  return MultiGraph::with_ids(g.n(), std::move(out), g.steiner());
}

Contraction contract(const MultiGraph& g, const std::vector<VSet>& groups) {
  std::vector<int> group_of(g.n(), -1);
  for (int i = 0; i < static_cast<int>(groups.size()); ++i) {
    for_each_vertex(groups[i] & g.all(), [&](int v) {
      if (group_of[v] != -1) fail(Errc::OverlappingGroups, fmt::format("vertex {}", v));
      group_of[v] = i;
    });
  }
  Contraction r;
  r.map.assign(g.n(), -1);
  std::vector<int> group_id(groups.size(), -1);
  int next = 0;
  for (Vertex v = 0; v < g.n(); ++v) {
    int gi = group_of[v];
    if (gi == -1) {
      r.map[v] = next++;
    } else {
      if (group_id[gi] == -1) group_id[gi] = next++;
      r.map[v] = group_id[gi];
    }
  }
  VSet steiner = 0;
  for_each_vertex(g.steiner(), [&](int v) { steiner |= bit(r.map[v]); });
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    Vertex a = r.map[e.u], b = r.map[e.v];
    if (a != b) edges.push_back({e.id, a, b});
  }
  r.graph = MultiGraph::with_ids(next, std::move(edges), steiner);
  return r;
}

namespace {

// Strips comments and returns whitespace separated integer tokens.
std::vector<long long> tokens(std::istream& in) {
  std::vector<long long> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      try {
        size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        out.push_back(v);
      } catch (const std::exception&) {
        fail(Errc::ParseError, fmt::format("bad token '{}'", tok));
      }
    }
  }
  return out;
}

}  // namespace

MultiGraph parse_graph(std::istream& in) {
  auto t = tokens(in);
  if (t.size() < 3) fail(Errc::ParseError, "missing header 'n m k'");
  long long n = t[0], m = t[1], k = t[2];
  if (n < 1 || n > kMaxVertices) fail(Errc::TooLarge, fmt::format("n={}", n));
  if (m < 0 || k < 0) fail(Errc::ParseError, "negative count");
  if (static_cast<long long>(t.size()) != 3 + k + 2 * m)
    fail(Errc::ParseError, fmt::format("expected {} numbers, found {}", 3 + k + 2 * m, t.size()));
  VSet steiner = 0;
  for (long long i = 0; i < k; ++i) {
    long long s = t[3 + i];
    if (s < 0 || s >= n) fail(Errc::InvalidVertex, fmt::format("terminal {}", s));
    steiner |= bit(static_cast<int>(s));
  }
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (long long i = 0; i < m; ++i) {
    long long u = t[3 + k + 2 * i], v = t[4 + k + 2 * i];
    if (u < 0 || u >= n || v < 0 || v >= n) fail(Errc::InvalidVertex, fmt::format("edge {}", i));
    if (u == v) fail(Errc::SelfLoopRejected, fmt::format("edge {} at vertex {}", i, u));
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  return MultiGraph(static_cast<int>(n), edges, steiner);
}

MultiGraph parse_graph_string(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

MultiGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, fmt::format("cannot open {}", path));
  return parse_graph(in);
}

std::string format_graph(const MultiGraph& g) {
  std::string out = fmt::format("{} {} {}\n", g.n(), g.m(), popcount(g.steiner()));
  auto terms = members(g.steiner());
  out += fmt::format("{}\n", fmt::join(terms, " "));
  for (const Edge& e : g.edges()) out += fmt::format("{} {}\n", e.u, e.v);
  return out;
}

}  // namespace sck
