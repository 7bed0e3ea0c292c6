#pragma once

#include <optional>

#include "mecsim/constraints.hpp"
#include "mecsim/edge_exec.hpp"
#include "mecsim/local_exec.hpp"
#include "mecsim/topology.hpp"
#include "mecsim/workload.hpp"

namespace mecsim {

struct CostWeights {
  double delay = 1.0 / 3.0;   // omega_1
  double energy = 1.0 / 3.0;  // omega_2
  double charge = 1.0 / 3.0;  // omega_3
};

/// Optional min-max scaling of (DC, EC, UC) onto [0,1] before weighting.
/// Off by default; bounds are configured references, not data-derived.
struct CostNormalization {
  bool enabled = false;
  double dc_min = 0.0, dc_max = 40.0;
  double ec_min = 0.0, ec_max = 20.0;
  double uc_min = 0.0, uc_max = 2.0;
};

struct SlotResult {
  double local_delay_s = 0.0;      // DL
  double edge_delay_s = 0.0;       // DE
  double execution_delay_s = 0.0;  // DC = max(DL, DE)
  double md_energy_j = 0.0;        // EC = EL + EE
  double usage_charge = 0.0;       // UC
  double cost = 0.0;
  FeasibilityFlags flags;
};

SlotResult task_cost(double dl, double el, double de, double ee, double uc,
                     const CostWeights& weights, const CostNormalization& norm = {});

/// Pure constraint evaluation for one completed slot. `infra` must carry the
/// slot-start availabilities; C5/C6 are replayed against a scratch copy of its
/// ledger so stacked demands on one station or link are accounted for.
/// `placement` may be null when x = 0, `partition` when x = 1 (the flags tied
/// to a skipped pipeline evaluate as satisfied).
FeasibilityFlags check_constraints(const Task& task, double x,
                                   const PlacementRecord* placement,
                                   const GroupPartition* partition, double dl, double de,
                                   const EdgeInfrastructure& infra, const MobileDevice& md);

}  // namespace mecsim
