#include "mrsched/cost_model.hpp"

#include <algorithm>
#include <cmath>

namespace mrsched {

void HardwareParams::validate() const {
  if (mips <= 0 || disk_ms_per_page < 0 || page_tuples <= 0 || tuple_bytes <= 0)
    throw SchedError("hardware: page/speed parameters must be positive");
  if (mem_pages_per_site <= 0) throw SchedError("hardware: site memory must be positive");
  if (startup_alpha_ms < 0 || net_beta_ms_per_byte < 0) throw SchedError("hardware: negative overhead");
  if (fudge_factor < 1.0) throw SchedError("hardware: fudge factor below 1");
}

RelationStats RelationStats::of(std::string name, long long tuples, int page_tuples) {
  if (tuples < 0) throw SchedError("relation " + name + ": negative cardinality");
  RelationStats r;
  r.name = std::move(name);
  r.tuples = tuples;
  r.pages = (tuples + page_tuples - 1) / page_tuples;
  return r;
}

RelationStats key_join_output(const RelationStats& left, const RelationStats& right) {
  const RelationStats& larger = left.tuples >= right.tuples ? left : right;
  RelationStats r;
  r.name = "(" + left.name + "*" + right.name + ")";
  r.tuples = larger.tuples;
  r.pages = larger.pages;
  return r;
}

const char* op_kind_name(OpKind k) {
  switch (k) {
    case OpKind::Scan: return "scan";
    case OpKind::Select: return "select";
    case OpKind::Build: return "build";
    case OpKind::Probe: return "probe";
    case OpKind::Store: return "store";
    case OpKind::Merged: return "merged";
  }
  return "?";
}

OperatorCost estimate_operator(OpKind kind, const std::string& op_id,
                               const RelationStats& input, const RelationStats* inner,
                               const HardwareParams& hw, int ssr_dims,
                               double selectivity, bool repartitions) {
  hw.validate();
  if (ssr_dims < 1) throw SchedError(op_id + ": need at least one space-shared dimension");
  if (selectivity < 0.0 || selectivity > 1.0) throw SchedError(op_id + ": selectivity outside [0,1]");

  OperatorCost oc;
  oc.kind = kind;
  oc.op_id = op_id;
  const auto& ic = hw.instr;
  double cpu_instr = 0.0, disk_ms = 0.0;
  double buffer_demand = 2.0 / double(hw.mem_pages_per_site);
  std::vector<double> demand(ssr_dims, 0.0);

  switch (kind) {
    case OpKind::Scan:
    case OpKind::Select: {
      long long out_tuples =
          kind == OpKind::Select ? llround(selectivity * double(input.tuples)) : input.tuples;
      oc.output = RelationStats::of(input.name, out_tuples, hw.page_tuples);
      cpu_instr = double(input.pages) * ic.read_page + double(input.tuples) * ic.extract_tuple;
      if (repartitions) cpu_instr += double(out_tuples) * ic.hash_tuple;
      disk_ms = double(input.pages) * hw.disk_ms_per_page;
      demand[0] = buffer_demand;
      break;
    }
    case OpKind::Build: {
      oc.output = input;
      cpu_instr = double(input.tuples) * ic.hash_tuple;
      demand[0] = hw.fudge_factor * double(input.pages) / double(hw.mem_pages_per_site);
      break;
    }
    case OpKind::Probe: {
      if (!inner) throw SchedError(op_id + ": probe needs the build side");
      oc.output = key_join_output(input, *inner);
      cpu_instr = double(input.tuples) * ic.probe_hash + double(oc.output.tuples) * ic.extract_tuple;
      if (repartitions) cpu_instr += double(oc.output.tuples) * ic.hash_tuple;
      break;
    }
    case OpKind::Store: {
      oc.output = input;
      cpu_instr = double(input.pages) * ic.write_page + double(input.tuples) * ic.extract_tuple;
      disk_ms = double(input.pages) * hw.disk_ms_per_page;
      demand[0] = buffer_demand;
      break;
    }
    case OpKind::Merged:
      throw SchedError(op_id + ": merged operators come from merge_costs");
  }

  oc.base_work = WorkVector({hw.cpu_ms(cpu_instr), disk_ms, 0.0});
  oc.total_demand = DemandVector(std::move(demand));
  oc.bytes_out = kind == OpKind::Store ? 0.0 : double(oc.output.tuples) * double(hw.tuple_bytes);
  return oc;
}

OperatorCost merge_costs(const OperatorCost& build, const OperatorCost& probe) {
  if (build.base_work.dim() != probe.base_work.dim())
    throw SchedError("merge_costs: dimension mismatch");
  OperatorCost oc;
  oc.kind = OpKind::Merged;
  oc.op_id = build.op_id + "+" + probe.op_id;
  std::vector<double> w(build.base_work.c);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] += probe.base_work.c[i];
  oc.base_work = WorkVector(std::move(w));
  oc.total_demand = build.total_demand;
  oc.bytes_out = build.bytes_out + probe.bytes_out;
  oc.output = probe.output;
  return oc;
}

}  // namespace mrsched
