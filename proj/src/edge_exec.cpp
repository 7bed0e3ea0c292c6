#include "mecsim/edge_exec.hpp"

#include <algorithm>
#include <cmath>

namespace mecsim {

double transmission_delay(const Task& task, double x, const PlacementRecord& placement,
                          double uplink_bps, double downlink_bps,
                          const EdgeInfrastructure& infra) {
  const int n = task.chain.size();
  const double offloaded_bits = x * task.input_bits;
  const double xi_last = task.chain.last_output_ratio();

  double dt = offloaded_bits / uplink_bps;

  for (int li : placement.segment_paths.front().links)
    dt += offloaded_bits / (infra.links[li].bandwidth_available * kBpsPerMbps);

  // Inter-VNF terms divide by the required bandwidth br_i, not the link
  // capacities, and are charged even when both VNFs share a host.
  for (int i = 1; i < n; ++i) {
    dt += task.chain.vnfs[i - 1].output_ratio * offloaded_bits /
          (task.chain.inter_vnf_bandwidth_mbps[i - 1] * kBpsPerMbps);
  }

  for (int li : placement.segment_paths.back().links)
    dt += xi_last * offloaded_bits / (infra.links[li].bandwidth_available * kBpsPerMbps);

  dt += xi_last * offloaded_bits / downlink_bps;
  return dt;
}

double edge_processing_delay(const Task& task, double x) {
  const double offloaded = x * task.input_bits * task.cycles_per_bit;
  double dp = 0.0;
  for (const auto& f : task.chain.vnfs) {
    dp += task.chain.output_ratio_before(f.index_in_chain) * offloaded /
          (f.compute_demand_ghz * kCyclesPerGhz);
  }
  return dp;
}

double chain_instantiation_delay(const ServiceChain& chain) {
  double di = 0.0;
  for (const auto& f : chain.vnfs) di = std::max(di, f.instantiation_delay_s);
  return di;
}

double edge_delay(double instantiation_s, double transmission_s, double processing_s) {
  return instantiation_s + transmission_s + processing_s;
}

EdgeEnergy edge_energy(const Task& task, double x, double uplink_bps, double downlink_bps,
                       const MobileDevice& md) {
  const double offloaded_bits = x * task.input_bits;
  EdgeEnergy e;
  e.uplink_j = offloaded_bits / uplink_bps * md.tx_power_w;
  e.downlink_j =
      task.chain.last_output_ratio() * offloaded_bits / downlink_bps * md.rx_power_w;
  e.total_j = e.uplink_j + e.downlink_j;
  return e;
}

double unit_price(double compute_demand_ghz, double alpha, double beta) {
  return std::exp(-alpha) * (std::exp(compute_demand_ghz) - 1.0) * beta;
}

double usage_charge(const Task& task, double x, const PricingPolicy& pricing) {
  const double offloaded = x * task.input_bits * task.cycles_per_bit;
  double uc = 0.0;
  for (const auto& f : task.chain.vnfs) {
    const double processing_s = task.chain.output_ratio_before(f.index_in_chain) * offloaded /
                                (f.compute_demand_ghz * kCyclesPerGhz);
    uc += processing_s * unit_price(f.compute_demand_ghz, pricing.alpha, pricing.beta);
  }
  return uc;
}

EdgeOutcome evaluate_edge(const Task& task, double x, const PlacementRecord& placement,
                          double uplink_bps, double downlink_bps,
                          const EdgeInfrastructure& infra, const MobileDevice& md,
                          const PricingPolicy& pricing) {
  EdgeOutcome out;
  out.instantiation_delay_s = chain_instantiation_delay(task.chain);
  out.transmission_delay_s =
      transmission_delay(task, x, placement, uplink_bps, downlink_bps, infra);
  out.processing_delay_s = edge_processing_delay(task, x);
  out.edge_delay_s =
      edge_delay(out.instantiation_delay_s, out.transmission_delay_s, out.processing_delay_s);
  out.energy = edge_energy(task, x, uplink_bps, downlink_bps, md);
  out.usage_charge = usage_charge(task, x, pricing);
  return out;
}

}  // namespace mecsim
