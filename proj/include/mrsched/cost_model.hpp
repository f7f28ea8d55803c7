#pragma once

#include <cstdint>
#include <string>

#include "mrsched/vectors.hpp"

namespace mrsched {

// Instruction counts for the primitive actions of the hash-join testbed.
struct CpuInstructionCounts {
  double read_page = 5000.0;
  double write_page = 5000.0;
  double extract_tuple = 300.0;
  double hash_tuple = 100.0;
  double probe_hash = 200.0;
};

struct HardwareParams {
  double mips = 10.0;                  // CPU speed, million instructions/s
  double disk_ms_per_page = 5.0;
  int page_tuples = 32;
  int tuple_bytes = 128;
  long long mem_pages_per_site = 8192; // 32 MB of 4 KB pages
  double startup_alpha_ms = 25.0;      // per-clone activation cost
  double net_beta_ms_per_byte = 0.0002;
  double fudge_factor = 1.4;           // hash table expansion over raw pages
  CpuInstructionCounts instr;

  long long page_bytes() const { return 1LL * page_tuples * tuple_bytes; }
  double cpu_ms(double instructions) const { return instructions / (mips * 1000.0); }
  void validate() const;
};

struct RelationStats {
  std::string name;
  long long tuples = 0;
  long long pages = 0;

  static RelationStats of(std::string name, long long tuples, int page_tuples);
};

// Key join: the result has as many tuples as the larger operand.
RelationStats key_join_output(const RelationStats& left, const RelationStats& right);

enum class OpKind { Scan, Select, Build, Probe, Store, Merged };

const char* op_kind_name(OpKind k);

// A physical operator before parallelization.  base_work excludes any
// communication overhead; that is added per clone once a degree is chosen.
// total_demand is the operator's space requirement regardless of how many
// clones execute it.
struct OperatorCost {
  OpKind kind = OpKind::Scan;
  std::string op_id;
  WorkVector base_work;      // [cpu, disk, net] in ms
  DemandVector total_demand; // normalized against one site's memory
  double bytes_out = 0.0;    // output shipped over the interconnect
  RelationStats output;
};

// Cost formulas per operator kind (work dimensions are [cpu, disk, net]):
//   Scan/Select  cpu = pages*read_page + tuples*extract_tuple
//                      (+ out_tuples*hash_tuple when feeding a split table),
//                disk = pages * disk_ms_per_page, demand = 2 pages (buffers)
//   Build        cpu = tuples*hash_tuple, demand = F * pages of the input
//   Probe        cpu = in_tuples*probe_hash + out_tuples*extract_tuple,
//                demand = 0 (the hash table is carried by its Build)
//   Store        cpu = pages*write_page + tuples*extract_tuple,
//                disk = pages * disk_ms_per_page, demand = 2 pages
// `inner` is required for Probe (the build side determining result size).
// `selectivity` applies to Select only; `repartitions` marks operators whose
// output is hash-partitioned into a downstream split table.
OperatorCost estimate_operator(OpKind kind, const std::string& op_id,
                               const RelationStats& input, const RelationStats* inner,
                               const HardwareParams& hw, int ssr_dims,
                               double selectivity = 1.0, bool repartitions = false);

// Combined operator covering both phases of a join at one site set: work
// accumulates, the space reservation stays the build's table.
OperatorCost merge_costs(const OperatorCost& build, const OperatorCost& probe);

}  // namespace mrsched
