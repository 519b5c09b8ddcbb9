#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "sck/audit.hpp"
#include "sck/dual.hpp"
#include "sck/harness.hpp"
#include "sck/index_io.hpp"

using namespace sck;
using ojson = nlohmann::ordered_json;

namespace {

bool g_json = false;

std::string set_text(VSet s) { return fmt::format("{{{}}}", fmt::join(members(s), ",")); }

ojson cut_json(const Cut& c) {
  ojson j;
  j["side"] = members(c.side);
  j["capacity"] = c.capacity;
  j["steiner"] = c.steiner;
  return j;
}

void emit(const ojson& j, const std::string& text) {
  if (g_json)
    std::cout << j.dump() << "\n";
  else
    std::cout << text;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) fail(Errc::ParseError, fmt::format("cannot write {}", path));
  out << text;
}

ojson stats_object(const DualOracle& o) { return ojson::parse(stats_json(index_stats(o))); }

std::string stats_text(const DualOracle& o) {
  const IndexStats s = index_stats(o);
  return fmt::format(
      "n {} m {} terminals {} lambda {}\nunits {} (steiner {}, stretched {})\nskeleton nodes {} cycles {}\n"
      "entries capacity-only {} full {}\n",
      s.n, s.m, s.terminals, s.lambda, s.units, s.steiner_units, s.stretched_units, s.skeleton_nodes,
      s.skeleton_cycles, s.capacity_entries, s.full_entries);
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steiner mincut index and dual edge sensitivity oracle"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", g_json, "Print stable JSON instead of text");

  std::string graph_path, index_path, out_path;

  auto* build = app.add_subcommand("build", "Build an index from a graph file");
  build->add_option("graph", graph_path, "Graph file")->required();
  build->add_option("-o,--output", out_path, "Index file")->required();

  auto* query = app.add_subcommand("query", "Query an index");
  query->require_subcommand(1);
  query->add_option("index", index_path, "Index file")->required();
  bool witness = false;
  query->add_flag("-w,--witness", witness, "Also report a witness cut");
  std::vector<int> cut_args, fail_args, insert_args;
  auto* qcut = query->add_subcommand("cut", "Least Steiner cut separating u and v: lambda, lambda+1 or above");
  qcut->add_option("vertices", cut_args, "u v")->expected(2)->required();
  auto* qfail = query->add_subcommand("fail", "Steiner mincut after failing two edges (edge ids)");
  qfail->add_option("edges", fail_args, "e1 e2")->expected(2)->required();
  auto* qins = query->add_subcommand("insert", "Steiner mincut after inserting edges u1-v1 and u2-v2");
  qins->add_option("endpoints", insert_args, "u1 v1 u2 v2")->expected(4)->required();

  auto* ver = app.add_subcommand("verify", "Run every check against brute-force recomputation");
  ver->add_option("graph", graph_path, "Graph file")->required();

  auto* gen = app.add_subcommand("gen", "Generate an instance");
  gen->require_subcommand(1);
  int n = 8, m = 16, k = 4, left = 4, right = 4;
  double density = 0.5;
  std::uint64_t seed = 1;
  std::string gen_out;
  auto* grand = gen->add_subcommand("random", "Random connected multigraph");
  grand->add_option("-n", n, "Vertices")->capture_default_str();
  grand->add_option("-m", m, "Edges")->capture_default_str();
  grand->add_option("-k", k, "Terminals")->capture_default_str();
  grand->add_option("--seed", seed, "Seed")->capture_default_str();
  grand->add_option("-o,--output", gen_out, "Graph file (default stdout)");
  auto* ghard = gen->add_subcommand("hard", "Hard instance H built from a random bipartite graph");
  ghard->add_option("--left", left, "Left side size")->capture_default_str();
  ghard->add_option("--right", right, "Right side size")->capture_default_str();
  ghard->add_option("--density", density, "Edge probability of the bipartite graph")->capture_default_str();
  ghard->add_option("--seed", seed, "Seed")->capture_default_str();
  ghard->add_option("-o,--output", gen_out, "Graph file (default stdout)");

  auto* stats = app.add_subcommand("stats", "Structure counts of an index");
  stats->add_option("index", index_path, "Index file")->required();

  auto* bench = app.add_subcommand("bench", "Build time, stored entries and probe histograms");
  bench->add_option("graph", graph_path, "Graph file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) {
      const MultiGraph g = load_graph(graph_path);
      const auto t = std::chrono::steady_clock::now();
      const DualOracle o = DualOracle::build(g);
      const double secs = seconds_since(t);
      save_index(out_path, g);
      ojson j = stats_object(o);
      j["build_seconds"] = secs;
      j["index"] = out_path;
      emit(j, fmt::format("wrote {} ({:.3f} s)\n{}", out_path, secs, stats_text(o)));
    } else if (*query) {
      const DualOracle o = DualOracle::build(load_index_graph(index_path));
      const MultiGraph& g = o.carcass().graph();
      ojson j;
      std::string text;
      if (*qcut) {
        const Vertex u = cut_args[0], v = cut_args[1];
        if (u < 0 || v < 0 || u >= g.n() || v >= g.n()) fail(Errc::InvalidVertex, "vertex out of range");
        const CutLevel level = o.minplus1().query_cut(u, v);
        j["query"] = "cut";
        j["u"] = u;
        j["v"] = v;
        j["level"] = cut_level_name(level);
        text = fmt::format("{}\n", cut_level_name(level));
        if (witness && level != CutLevel::Above) {
          const Cut c = o.minplus1().report_witness(u, v, level);
          j["witness"] = cut_json(c);
          text += fmt::format("witness {} capacity {}\n", set_text(c.side), c.capacity);
        }
      } else if (*qfail) {
        const EdgeId e = fail_args[0], f = fail_args[1];
        const int cap = o.query_fail_capacity(e, f);
        j["query"] = "fail";
        j["edges"] = {e, f};
        j["lambda"] = o.lambda();
        j["capacity"] = cap;
        text = fmt::format("{}\n", cap);
        if (witness) {
          const Cut c = o.query_fail_cut(e, f);
          j["witness"] = cut_json(c);
          text += fmt::format("witness {} capacity {}\n", set_text(c.side), c.capacity);
        }
      } else {
        const std::pair<Vertex, Vertex> e{insert_args[0], insert_args[1]}, f{insert_args[2], insert_args[3]};
        const int cap = o.query_insert_capacity(e, f);
        j["query"] = "insert";
        j["edges"] = {{e.first, e.second}, {f.first, f.second}};
        j["lambda"] = o.lambda();
        j["capacity"] = cap;
        text = fmt::format("{}\n", cap);
        if (witness) {
          const Cut c = o.query_insert_cut(e, f);
          j["witness"] = cut_json(c);
          text += fmt::format("witness {} capacity {}\n", set_text(c.side), c.capacity);
        }
      }
      emit(j, text);
    } else if (*ver) {
      const AuditReport r = verify(load_graph(graph_path));
      ojson j;
      ojson checks = ojson::array();
      std::string text;
      for (const Check& c : r.checks) {
        checks.push_back({{"name", c.name}, {"checked", c.checked}, {"failed", c.failed}, {"example", c.example}});
        text += fmt::format("[{}] {} {}/{} failed{}\n", c.ok() ? "PASS" : "FAIL", c.name, c.failed, c.checked,
                            c.example.empty() ? "" : " (" + c.example + ")");
      }
      j["ok"] = r.ok();
      j["checks"] = checks;
      j["max_probes"] = {{"cut", r.max_cut_probes}, {"fail", r.max_fail_probes}, {"insert", r.max_insert_probes}};
      emit(j, text);
      return r.ok() ? 0 : 1;
    } else if (*gen) {
      if (*grand) {
        write_text(gen_out, format_graph(gen_random(n, m, k, seed)));
      } else {
        const HardInstance hi = gen_hard_instance(random_bipartite(left, right, density, seed));
        write_text(gen_out, format_graph(hi.h));
        if (!gen_out.empty() && gen_out != "-") {
          ojson j;
          j["left"] = left;
          j["right"] = right;
          j["adjacency"] = hi.b.adj;
          std::string text;
          for (int u = 0; u < left; ++u)
            for (int v = 0; v < right; ++v)
              if (hi.b.edge(u, v)) text += fmt::format("{} {}\n", u, v);
          emit(j, text);
        }
      }
    } else if (*stats) {
      const DualOracle o = DualOracle::build(load_index_graph(index_path));
      emit(stats_object(o), stats_text(o));
    } else if (*bench) {
      const MultiGraph g = load_graph(graph_path);
      auto t = std::chrono::steady_clock::now();
      const DualOracle o = DualOracle::build(g);
      const double build_secs = seconds_since(t);
      t = std::chrono::steady_clock::now();
      const Measurement meas = measure(o);
      const double query_secs = seconds_since(t);
      ojson j = ojson::parse(measurement_json(meas));
      j["build_seconds"] = build_secs;
      j["query_seconds"] = query_secs;
      std::string text = fmt::format("build {:.3f} s, all queries {:.3f} s\nentries capacity-only {} full {}\n",
                                     build_secs, query_secs, meas.capacity_entries, meas.full_entries);
      for (const auto& [kind, hist] : meas.probe_histograms) {
        std::size_t total = 0;
        std::uint64_t worst = 0;
        for (auto [p, c] : hist) {
          total += c;
          worst = std::max(worst, p);
        }
        text += fmt::format("{}: {} queries, max probes {}\n", kind, total, worst);
      }
      emit(j, text);
    }
  } catch (const Error& ex) {
    if (g_json)
      std::cout << ojson{{"error", ex.what()}}.dump() << "\n";
    else
      std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
