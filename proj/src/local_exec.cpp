#include "mecsim/local_exec.hpp"

#include <algorithm>
#include <sstream>

namespace mecsim {

namespace {

void check_x(double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw ConstraintViolation(Constraint::C1, "offloading ratio outside [0,1]");
}

}  // namespace

GroupPartition partition_into_groups(const ServiceChain& chain, const MobileDevice& md) {
  GroupPartition partition;
  std::vector<int> current;
  double used = 0.0;
  for (const auto& f : chain.vnfs) {
    if (f.compute_demand_ghz > md.compute_capacity_ghz) {
      std::ostringstream msg;
      msg << "VNF " << f.index_in_chain << " demands " << f.compute_demand_ghz
          << " GHz, MD offers " << md.compute_capacity_ghz;
      throw ConstraintViolation(Constraint::C4, msg.str());
    }
    if (!current.empty() && used + f.compute_demand_ghz > md.compute_capacity_ghz) {
      partition.groups.push_back(std::move(current));
      current.clear();
      used = 0.0;
    }
    current.push_back(f.index_in_chain);
    used += f.compute_demand_ghz;
  }
  if (!current.empty()) partition.groups.push_back(std::move(current));
  return partition;
}

double local_delay(const Task& task, double x, const GroupPartition& partition) {
  check_x(x);
  if (x == 1.0) return 0.0;  // no local data, the local pipeline is skipped

  const auto& chain = task.chain;
  const double chi = (1.0 - x) * task.input_bits * task.cycles_per_bit;
  double total = 0.0;
  for (std::size_t k = 0; k < partition.groups.size(); ++k) {
    const auto& group = partition.groups[k];
    double di_group = 0.0;
    for (int vnf_index : group)
      di_group = std::max(di_group, chain.vnfs[vnf_index - 1].instantiation_delay_s);
    total += di_group;
    for (std::size_t j = 0; j < group.size(); ++j) {
      const auto& f = chain.vnfs[group[j] - 1];
      double scale;
      if (k == 0 && j == 0) {
        scale = 1.0;
      } else if (j == 0) {
        // first VNF of a later group scales by the previous group's last output
        const auto& prev_group = partition.groups[k - 1];
        scale = chain.vnfs[prev_group.back() - 1].output_ratio;
      } else {
        scale = chain.vnfs[group[j - 1] - 1].output_ratio;
      }
      total += scale * chi / (f.compute_demand_ghz * kCyclesPerGhz);
    }
  }
  return total;
}

double local_energy(const Task& task, double x, const MobileDevice& md) {
  check_x(x);
  if (x == 1.0) return 0.0;

  const double base = (1.0 - x) * task.input_bits * task.cycles_per_bit;
  double total = 0.0;
  for (const auto& f : task.chain.vnfs) {
    const double cp_cycles = f.compute_demand_ghz * kCyclesPerGhz;
    total += task.chain.output_ratio_before(f.index_in_chain) * base *
             md.capacitance_coefficient * cp_cycles * cp_cycles;
  }
  return total;
}

}  // namespace mecsim
