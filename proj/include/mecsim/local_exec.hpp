#pragma once

#include <vector>

#include "mecsim/constraints.hpp"
#include "mecsim/workload.hpp"

namespace mecsim {

struct MobileDevice {
  double compute_capacity_ghz = 0.6;       // cp_MD
  double tx_power_w = 0.5;                 // p_MD^tr
  double rx_power_w = 0.1;                 // p_MD^re
  double capacitance_coefficient = 1e-26;  // kappa
};

/// In-order grouping of the chain under the MD's compute budget.
struct GroupPartition {
  std::vector<std::vector<int>> groups;  // 1-based VNF indices, order preserved

  int group_count() const { return static_cast<int>(groups.size()); }
};

/// Greedy in-order packing: extend the current group while the summed demand
/// stays within cp_MD. Throws ConstraintViolation(C4) when a single VNF does
/// not fit on the MD at all.
GroupPartition partition_into_groups(const ServiceChain& chain, const MobileDevice& md);

/// Local computing delay: per-group instantiation (max DI in group) plus the
/// piecewise per-VNF processing delays. x = 1 skips the local pipeline.
double local_delay(const Task& task, double x, const GroupPartition& partition);

/// Local computing energy at the MD. x = 1 yields 0.
double local_energy(const Task& task, double x, const MobileDevice& md);

}  // namespace mecsim
