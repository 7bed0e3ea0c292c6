#pragma once

#include <vector>

#include "mecsim/random.hpp"

namespace mecsim {

// Unit conventions used throughout: 1 Kb = 1000 bits, 1 Mbps = 1e6 bit/s,
// 1 GHz = 1e9 cycle/s. Stored capacities stay in GHz/Mbps; delay and energy
// formulas convert to base units.
inline constexpr double kBitsPerKb = 1e3;
inline constexpr double kBpsPerMbps = 1e6;
inline constexpr double kCyclesPerGhz = 1e9;

struct WorkloadConfig {
  double d_min_kb = 800.0;
  double d_max_kb = 1000.0;
  double c_min = 800.0;  // cycles per bit
  double c_max = 1000.0;
  int n_min = 3;  // VNFs per SFC
  int n_max = 5;
  double vnf_cp_min_ghz = 0.1;
  double vnf_cp_max_ghz = 0.5;
  double br_min_mbps = 5.0;
  double br_max_mbps = 10.0;
  double xi_min = 0.5;  // output ratio per VNF
  double xi_max = 1.5;
  double deadline_min_s = 20.0;
  double deadline_max_s = 35.0;
  double di_min_s = 0.05;  // instantiation delay per VNF
  double di_max_s = 0.15;
};

struct VnfSpec {
  int index_in_chain = 0;            // 1-based
  double compute_demand_ghz = 0.0;   // cp(f_i)
  double instantiation_delay_s = 0;  // DI(f_i)
  double output_ratio = 1.0;         // xi_i
};

struct ServiceChain {
  std::vector<VnfSpec> vnfs;
  std::vector<double> inter_vnf_bandwidth_mbps;  // br_i, length N-1

  int size() const { return static_cast<int>(vnfs.size()); }

  /// xi_{i-1} for the 1-based VNF index i, with xi_0 = 1.
  double output_ratio_before(int i) const {
    return i <= 1 ? 1.0 : vnfs[static_cast<std::size_t>(i - 2)].output_ratio;
  }
  double last_output_ratio() const { return vnfs.back().output_ratio; }
};

struct Task {
  ServiceChain chain;
  double input_bits = 0.0;      // d
  double cycles_per_bit = 0.0;  // c
  double deadline_s = 0.0;      // D_max
  int slot = 0;
};

struct Channel {
  double bandwidth_hz = 20e6;       // W
  double noise_power_w = 1e-6;      // eta^2
  double md_tx_power_w = 0.5;       // p_MD^tr
  double md_rx_power_w = 0.1;       // p_MD^re
  double gain_reference = 1e-3;     // gain at the reference distance
  double pathloss_exponent = 3.0;
  double reference_distance_m = 100.0;
};

Task generate_task(const WorkloadConfig& config, int slot, Rng& rng);

/// Log-distance path loss: gain_reference * (distance / reference)^-exponent.
double channel_gain(double distance_m, const Channel& ch);

/// Shannon rate in bit/s: W * log2(1 + tx_power * gain / noise).
double link_rate(double tx_power_w, double gain, const Channel& ch);

}  // namespace mecsim
