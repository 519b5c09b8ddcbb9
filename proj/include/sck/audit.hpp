#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sck/dual.hpp"
#include "sck/graph.hpp"

namespace sck {

// One named property: how many instances were checked and how many failed.
struct Check {
  std::string name;
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::string example;  // first failure

  bool ok() const { return failed == 0; }
};

struct AuditReport {
  std::vector<Check> checks;
  std::uint64_t max_cut_probes = 0;
  std::uint64_t max_fail_probes = 0;
  std::uint64_t max_insert_probes = 0;

  Check& get(const std::string& name);
  const Check* find(const std::string& name) const;
  void record(const std::string& name, bool ok, const std::string& what = {});
  void merge(const AuditReport& other);
  bool ok() const;
};

// Flow and enumeration suites: lambda, classes, tight cuts, the three-cut
// star bounds (graphs up to star_limit vertices) and the crossing-edge count.
AuditReport audit_reference(const MultiGraph& g, int star_limit = 10);
// Skeleton minimal cuts against the enumerated mincut partitions.
AuditReport audit_skeleton(const MultiGraph& g, const Carcass& c);
// Nearest-cut family bounds of every singleton class structure.
AuditReport audit_families(const MultiGraph& g, const MinPlusOneIndex& idx);
// Crossing-cut edge property and S* labels.
AuditReport audit_oracle_structure(const DualOracle& o);

struct QueryAuditOptions {
  int full_insert_grid_limit = 8;  // all insertion pairs up to this many vertices
  int insert_samples = 300;
  std::uint64_t seed = 1;
};

// Every query answer of o against recomputation on g; o may come from
// another graph, which is how a corrupted oracle is detected.
AuditReport audit_queries(const MultiGraph& g, const DualOracle& o, const QueryAuditOptions& opt = {});

// All suites on one graph.
AuditReport verify(const MultiGraph& g);

}  // namespace sck
