#include "sck/audit.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <random>
#include <set>

#include <fmt/format.h>

#include "sck/reference.hpp"

namespace sck {

Check& AuditReport::get(const std::string& name) {
  for (Check& c : checks)
    if (c.name == name) return c;
  checks.push_back(Check{name, 0, 0, {}});
  return checks.back();
}

const Check* AuditReport::find(const std::string& name) const {
  for (const Check& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

void AuditReport::record(const std::string& name, bool ok, const std::string& what) {
  Check& c = get(name);
  ++c.checked;
  if (!ok) {
    if (c.failed == 0) c.example = what;
    ++c.failed;
  }
}

void AuditReport::merge(const AuditReport& other) {
  for (const Check& o : other.checks) {
    Check& c = get(o.name);
    if (c.failed == 0 && o.failed > 0) c.example = o.example;
    c.checked += o.checked;
    c.failed += o.failed;
  }
  max_cut_probes = std::max(max_cut_probes, other.max_cut_probes);
  max_fail_probes = std::max(max_fail_probes, other.max_fail_probes);
  max_insert_probes = std::max(max_insert_probes, other.max_insert_probes);
}

bool AuditReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok(); });
}

namespace {

std::string set_text(VSet s) {
  std::string out = "{";
  for (Vertex v : members(s)) out += (out.size() > 1 ? "," : "") + std::to_string(v);
  return out + "}";
}

template <class F>
void for_each_singleton(const MinPlusOneIndex& idx, F&& f) {
  const Carcass& c = idx.carcass();
  for (UnitId w = 0; w < c.unit_count(); ++w) {
    const ClassIndex* ci = idx.class_index(w);
    if (!ci) continue;
    switch (ci->kind()) {
      case ClassKind::Singleton: f(*ci); break;
      case ClassKind::MultiTerminal: f(*ci->merged()); break;
      default:
        for (int i = 0; i < ci->cover_count(); ++i) f(ci->cover_class(i));
    }
  }
}

void star_suite(const MultiGraph& g, AuditReport& r) {
  const auto fam = cut_family(g);
  const auto classes = connectivity_classes(g);
  const VSet all = g.all(), S = g.steiner();
  const auto& p = fam.plus1cuts;
  const std::size_t k = p.size();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      for (std::size_t l = j + 1; l < k; ++l)
        for (int o = 0; o < 8; ++o) {
          const VSet c1 = o & 1 ? all & ~p[i].side : p[i].side;
          const VSet c2 = o & 2 ? all & ~p[j].side : p[j].side;
          const VSet c3 = o & 4 ? all & ~p[l].side : p[l].side;
          const VSet va = c1 & ~c2 & ~c3, vb = c2 & ~c1 & ~c3, vc = c3 & ~c1 & ~c2;
          if (!(va & S) || !(vb & S) || !(vc & S)) continue;
          const VSet abc = c1 & c2 & c3, phi = all & ~(c1 | c2 | c3);
          const int cap = cut_value(g, abc);
          auto what = [&] { return fmt::format("{} {} {}", set_text(c1), set_text(c2), set_text(c3)); };
          r.record("gen3star_bound", cap <= 3, what());
          for (VSet W : classes) {
            const int kk = ((va & W) != 0) + ((vb & W) != 0) + ((vc & W) != 0);
            if (phi & W) r.record("gen3star_class_k", cap <= 3 - kk, what());
            if ((va & W) && (vb & W) && (vc & W)) r.record("gen3star_empty", abc == 0, what());
          }
          const VSet vab = c1 & c2 & ~c3, vbc = c2 & c3 & ~c1, vac = c1 & c3 & ~c2;
          const std::array<std::array<VSet, 3>, 3> pairs{{{vab, va, vb}, {vbc, vb, vc}, {vac, va, vc}}};
          for (const auto& [mid, x, y] : pairs) {
            if (!mid) continue;
            const VSet rest = all & ~(mid | x | y);
            int out = 0;
            for (const Edge& e : g.edges())
              if ((has(mid, e.u) && has(rest, e.v)) || (has(mid, e.v) && has(rest, e.u))) ++out;
            r.record("gen3star_pair_edges", out <= 2, what());
          }
        }
}

void gamma_suite(const MultiGraph& g, AuditReport& r) {
  std::mt19937_64 rng(0x5eed + g.n() * 131 + g.m());
  const VSet S = g.steiner(), all = g.all();
  int found = 0;
  for (int attempt = 0; attempt < 2000 && found < 100; ++attempt) {
    const VSet a = rng() & all, b = rng() & all;
    if (!((a & b) & S) || !(S & ~(a | b))) continue;
    ++found;
    int gamma = 0;
    for (const Edge& e : g.edges()) {
      const bool u1 = has(a & ~b, e.u), v1 = has(a & ~b, e.v);
      const bool u2 = has(b & ~a, e.u), v2 = has(b & ~a, e.v);
      if ((u1 && v2) || (u2 && v1)) ++gamma;
    }
    const int rhs = cut_value(g, a) + cut_value(g, b) - cut_value(g, a & b) - cut_value(g, a | b);
    r.record("gamma_count", 2 * gamma == rhs, fmt::format("{} {}", set_text(a), set_text(b)));
  }
}

}  // namespace

AuditReport audit_reference(const MultiGraph& g, int star_limit) {
  AuditReport r;
  const auto fam = cut_family(g);
  int least = INT_MAX;
  for (const Cut& c : fam.mincuts) least = std::min(least, c.capacity);
  r.record("lambda_enumeration", least == steiner_lambda(g), fmt::format("flow {} enumeration {}", steiner_lambda(g), least));
  auto a = connectivity_classes(g), b = classes_from_mincuts(g.n(), fam.mincuts);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  r.record("classes_two_ways", a == b);
  const VSet S = g.steiner();
  for (const Cut& c : fam.mincuts)
    for (VSet side : {c.side, g.all() & ~c.side}) {
      const VSet tight = tight_cut(g, side & S).side;
      r.record("tight_cut_minimal", (tight & ~side) == 0, set_text(side));
    }
  if (g.n() <= star_limit) star_suite(g, r);
  gamma_suite(g, r);
  return r;
}

AuditReport audit_skeleton(const MultiGraph& g, const Carcass& c) {
  AuditReport r;
  const VSet S = g.steiner();
  std::set<VSet> want, got;
  for (const Cut& m : cut_family(g).mincuts) {
    const VSet a = m.side & S;
    want.insert(has(a, c.s0()) ? S & ~a : a);
  }
  for (MinimalCut k : c.minimal_cuts()) got.insert(c.terminal_side(k));
  r.record("skeleton_partitions", want == got, fmt::format("{} bunches, {} skeleton cuts", want.size(), got.size()));
  return r;
}

AuditReport audit_families(const MultiGraph& g, const MinPlusOneIndex& idx) {
  AuditReport r;
  for_each_singleton(idx, [&](const ClassIndex& ci) {
    const ClassGraph& cw = ci.class_graph();
    const MultiGraph& gw = cw.graph;
    const VSet T = gw.steiner();
    for_each_vertex(cw.local, [&](int u) {
      const NearestCutFamily& f = ci.family_local(u);
      const auto& k = f.complements;
      const std::string where = fmt::format("class graph vertex {}", u);
      for_each_vertex(cw.local, [&](int x) {
        int count = 0;
        for (VSet c : k) count += has(c, x);
        r.record("mark_count", count <= 2, where);
      });
      for (std::size_t i = 0; i < k.size(); ++i)
        for (std::size_t j = i + 1; j < k.size(); ++j) {
          const VSet joint = k[i] & k[j];
          if (joint & T) r.record("p1_joint_terminal", (joint & cw.local) == 0, where);
          if (f.m_cut[i] && f.m_cut[j]) r.record("p2_mcut_pair", popcount(joint & T) <= 1, where);
          r.record("girth_no_4cycle", popcount(joint & T) <= 1, where);
        }
      for_each_vertex(T, [&](int t) {
        int m = 0;
        for (std::size_t i = 0; i < k.size(); ++i) m += f.m_cut[i] && has(k[i], t);
        r.record("mcut_terminal_triple", m <= 2, where);
      });
    });
  });
  const auto classes = connectivity_classes(g);
  for (const Cut& c : cut_family(g).plus1cuts) {
    int split = 0;
    for (VSet W : classes) split += (W & c.side) && (W & ~c.side);
    r.record("plus1_one_class", split <= 1, set_text(c.side));
  }
  return r;
}

AuditReport audit_oracle_structure(const DualOracle& o) {
  AuditReport r;
  for_each_singleton(o.minplus1(), [&](const ClassIndex& ci) {
    const MultiGraph& gw = ci.class_graph().graph;
    const VSet W = ci.class_graph().local, all = gw.all();
    const SteinerLabels* L = o.labels(&ci);
    for (const Edge& e : gw.edges()) {
      if (!has(W, e.u) || !has(W, e.v)) continue;
      auto crosses = [&](VSet c) { return has(c, e.u) != has(c, e.v); };
      for (std::size_t i = 0; i < L->cuts.size(); ++i)
        for (std::size_t j = i + 1; j < L->cuts.size(); ++j) {
          const VSet c1 = L->cuts[i], c2 = L->cuts[j];
          if (!crosses(c1) || !crosses(c2) || has(c1, e.u) != has(c2, e.u)) continue;
          if (!(c1 & ~c2) || !(c2 & ~c1) || !(c1 & c2) || !(all & ~(c1 | c2))) continue;
          const bool no_class = !((c1 & ~c2) & W) && !((c2 & ~c1) & W);
          const bool terms = ((c1 & ~c2) & gw.steiner()) && ((c2 & ~c1) & gw.steiner());
          r.record("p3_crossing_cuts", no_class == terms, fmt::format("{} {}", set_text(c1), set_text(c2)));
        }
    }
  });
  const LabelAudit a = audit_labels(o);
  Check& every = r.get("sstar_every_cut_labeled");
  every.checked = a.cuts;
  every.failed = a.unlabeled;
  Check& sound = r.get("label_sound");
  sound.checked = a.cuts + a.pairs;
  sound.failed = a.unsound + a.label_no_joint;
  Check& iff = r.get("label_iff_joint_terminal");
  iff.checked = a.pairs;
  iff.failed = a.joint_unlabeled + a.label_no_joint;
  const MultiGraph& g = o.carcass().graph();
  const std::string where = fmt::format("graph n={} m={} terminals={:#x}", g.n(), g.m(), g.steiner());
  for (const char* name : {"sstar_every_cut_labeled", "label_sound", "label_iff_joint_terminal"})
    if (Check& c = r.get(name); c.failed) c.example = where;
  return r;
}

AuditReport audit_queries(const MultiGraph& g, const DualOracle& o, const QueryAuditOptions& opt) {
  AuditReport r;
  const int lam = o.lambda();
  const VSet S = g.steiner();
  const MinPlusOneIndex& idx = o.minplus1();
  auto guarded = [&](const std::string& name, const std::string& what, auto&& body) {
    try {
      body();
    } catch (const Error& e) {
      r.record(name, false, what + ": " + e.what());
    }
  };

  for (Vertex u = 0; u < g.n(); ++u)
    for (Vertex v = u + 1; v < g.n(); ++v) {
      const std::string what = fmt::format("cut {} {}", u, v);
      guarded("cut_equivalence", what, [&] {
        const int ref = min_steiner_cut_separating(g, u, v, lam + 2);
        const CutLevel want = ref <= lam ? CutLevel::AtLambda : ref == lam + 1 ? CutLevel::AtLambdaPlus1 : CutLevel::Above;
        probes::reset();
        const CutLevel got = idx.query_cut(u, v);
        r.max_cut_probes = std::max(r.max_cut_probes, probes::read());
        r.record("cut_equivalence", got == want, what);
        if (got == want && got != CutLevel::Above) {
          const Cut c = idx.report_witness(u, v, got);
          const int cap = got == CutLevel::AtLambda ? lam : lam + 1;
          r.record("cut_witness", cut_value(g, c.side) == cap && has(c.side, u) != has(c.side, v) &&
                                      (c.side & S) && (S & ~c.side), what);
        }
      });
    }

  for (int i = 0; i < g.m(); ++i)
    for (int j = i + 1; j < g.m(); ++j) {
      const EdgeId e = g.edges()[i].id, f = g.edges()[j].id;
      const std::string what = fmt::format("fail {} {}", e, f);
      guarded("fail_equivalence", what, [&] {
        const MultiGraph h = surgery(g, {e, f}, {});
        const int want = steiner_lambda(h);
        probes::reset();
        const int got = o.query_fail_capacity(e, f);
        r.max_fail_probes = std::max(r.max_fail_probes, probes::read());
        r.record("fail_equivalence", got == want, fmt::format("{}: got {} want {}", what, got, want));
        const Cut c = o.query_fail_cut(e, f);
        r.record("fail_witness", cut_value(h, c.side) == want && (c.side & S) && (S & ~c.side), what);
      });
    }

  std::vector<std::pair<Vertex, Vertex>> ends;
  for (Vertex a = 0; a < g.n(); ++a)
    for (Vertex b = a + 1; b < g.n(); ++b) ends.emplace_back(a, b);
  std::vector<std::pair<std::size_t, std::size_t>> grid;
  if (g.n() <= opt.full_insert_grid_limit) {
    for (std::size_t i = 0; i < ends.size(); ++i)
      for (std::size_t j = i; j < ends.size(); ++j) grid.emplace_back(i, j);
  } else {
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::size_t> pick(0, ends.size() - 1);
    for (int s = 0; s < opt.insert_samples; ++s) grid.emplace_back(pick(rng), pick(rng));
  }
  for (auto [i, j] : grid) {
    const auto e = ends[i], f = ends[j];
    const std::string what = fmt::format("insert {} {} {} {}", e.first, e.second, f.first, f.second);
    guarded("insert_equivalence", what, [&] {
      const MultiGraph h = surgery(g, {}, {e, f});
      const int want = steiner_lambda(h);
      probes::reset();
      const int got = o.query_insert_capacity(e, f);
      r.max_insert_probes = std::max(r.max_insert_probes, probes::read());
      r.record("insert_equivalence", got == want, fmt::format("{}: got {} want {}", what, got, want));
      const Cut c = o.query_insert_cut(e, f);
      r.record("insert_witness", cut_value(h, c.side) == want && (c.side & S) && (S & ~c.side), what);
    });
  }
  return r;
}

AuditReport verify(const MultiGraph& g) {
  AuditReport r = audit_reference(g);
  const DualOracle o = DualOracle::build(g);
  r.merge(audit_skeleton(g, o.carcass()));
  r.merge(audit_families(g, o.minplus1()));
  r.merge(audit_oracle_structure(o));
  r.merge(audit_queries(g, o));
  return r;
}

}  // namespace sck
