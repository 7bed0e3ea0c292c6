#pragma once

#include <vector>

#include "mecsim/local_exec.hpp"
#include "mecsim/topology.hpp"
#include "mecsim/workload.hpp"

namespace mecsim {

/// One slot's VNF-to-station mapping plus the routed segments:
/// segment_paths[0] is v_MD -> host(f_1), segment_paths[i] (1..N-1) is
/// host(f_i) -> host(f_{i+1}), segment_paths[N] is host(f_N) -> v_MD.
struct PlacementRecord {
  std::vector<int> host_per_vnf;  // rho_i, length N
  int access_station = -1;        // v_MD
  std::vector<RoutePath> segment_paths;  // length N+1

  int chain_length() const { return static_cast<int>(host_per_vnf.size()); }
};

struct PricingPolicy {
  double alpha = 1.0;
  double beta = 0.1;
};

struct EdgeEnergy {
  double uplink_j = 0.0;    // EU
  double downlink_j = 0.0;  // ED
  double total_j = 0.0;     // EE
};

struct EdgeOutcome {
  double transmission_delay_s = 0.0;   // DT
  double processing_delay_s = 0.0;     // DP_E
  double instantiation_delay_s = 0.0;  // DI(F)
  double edge_delay_s = 0.0;           // DE = DI + DT + DP_E
  EdgeEnergy energy;                   // EE at the MD
  double usage_charge = 0.0;           // UC
};

/// Five-term transmission delay: uplink, first wired segment (per-link x*d/bw),
/// inter-VNF hops (xi_i*x*d/br_i), last wired segment, downlink. Wired-segment
/// denominators read the link availabilities of `infra` as given.
double transmission_delay(const Task& task, double x, const PlacementRecord& placement,
                          double uplink_bps, double downlink_bps,
                          const EdgeInfrastructure& infra);

double edge_processing_delay(const Task& task, double x);

/// Max instantiation delay over the whole chain, DI(F).
double chain_instantiation_delay(const ServiceChain& chain);

double edge_delay(double instantiation_s, double transmission_s, double processing_s);

EdgeEnergy edge_energy(const Task& task, double x, double uplink_bps, double downlink_bps,
                       const MobileDevice& md);

/// Price per processing second at demand cp: e^-alpha * (e^cp - 1) * beta, cp in GHz.
double unit_price(double compute_demand_ghz, double alpha, double beta);

double usage_charge(const Task& task, double x, const PricingPolicy& pricing);

/// Convenience bundle of the full edge pipeline for one placed slot.
EdgeOutcome evaluate_edge(const Task& task, double x, const PlacementRecord& placement,
                          double uplink_bps, double downlink_bps,
                          const EdgeInfrastructure& infra, const MobileDevice& md,
                          const PricingPolicy& pricing);

}  // namespace mecsim
