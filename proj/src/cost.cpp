#include "mecsim/cost.hpp"

#include <algorithm>

namespace mecsim {

namespace {

double minmax(double v, double lo, double hi) {
  if (hi <= lo) return 0.0;
  return (v - lo) / (hi - lo);
}

}  // namespace

SlotResult task_cost(double dl, double el, double de, double ee, double uc,
                     const CostWeights& weights, const CostNormalization& norm) {
  SlotResult r;
  r.local_delay_s = dl;
  r.edge_delay_s = de;
  r.execution_delay_s = std::max(dl, de);
  r.md_energy_j = el + ee;
  r.usage_charge = uc;
  double dc = r.execution_delay_s, ec = r.md_energy_j, charge = uc;
  if (norm.enabled) {
    dc = minmax(dc, norm.dc_min, norm.dc_max);
    ec = minmax(ec, norm.ec_min, norm.ec_max);
    charge = minmax(charge, norm.uc_min, norm.uc_max);
  }
  r.cost = weights.delay * dc + weights.energy * ec + weights.charge * charge;
  return r;
}

FeasibilityFlags check_constraints(const Task& task, double x,
                                   const PlacementRecord* placement,
                                   const GroupPartition* partition, double dl, double de,
                                   const EdgeInfrastructure& infra, const MobileDevice& md) {
  FeasibilityFlags flags;
  flags[Constraint::C1] = x >= 0.0 && x <= 1.0;

  const bool local_active = x < 1.0;
  const bool edge_active = x > 0.0;

  if (local_active) {
    flags[Constraint::C3] = dl <= task.deadline_s;
    bool c4 = true;
    for (const auto& f : task.chain.vnfs)
      c4 = c4 && f.compute_demand_ghz <= md.compute_capacity_ghz;
    flags[Constraint::C4] = c4;
    (void)partition;  // grouping feasibility is implied by C4
  }

  if (edge_active && placement != nullptr) {
    const int n = task.chain.size();
    bool c2 = static_cast<int>(placement->host_per_vnf.size()) == n;
    for (int host : placement->host_per_vnf)
      c2 = c2 && host >= 0 && host < infra.station_count();
    flags[Constraint::C2] = c2;

    // Replay the reservations on a scratch ledger so stacked demands on one
    // station or link are charged cumulatively, matching the staged checks.
    EdgeInfrastructure scratch = infra;
    ReservationReceipt receipt;
    bool c5 = true, c6 = true;
    for (int i = 1; i <= n; ++i) {
      const auto& f = task.chain.vnfs[i - 1];
      const int host = placement->host_per_vnf[i - 1];
      if (host >= 0 && host < scratch.station_count()) {
        c5 = try_reserve_compute(scratch, host, f.compute_demand_ghz, receipt) && c5;
      } else {
        c5 = false;
      }
      if (i >= 2) {
        const double br = task.chain.inter_vnf_bandwidth_mbps[i - 2];
        c6 = try_reserve_flow(scratch, placement->segment_paths[i - 1], br, receipt) && c6;
      }
    }
    flags[Constraint::C5] = c5;
    flags[Constraint::C6] = c6;
    flags[Constraint::C7] = de <= task.deadline_s;
  } else if (edge_active) {
    flags[Constraint::C2] = false;  // edge pipeline active but nothing placed
  }

  return flags;
}

}  // namespace mecsim
