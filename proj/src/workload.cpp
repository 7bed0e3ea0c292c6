#include "mecsim/workload.hpp"

#include <cmath>
#include <stdexcept>

namespace mecsim {

namespace {

void check_range(double lo, double hi, const char* what) {
  if (!(lo <= hi)) throw std::invalid_argument(std::string("invalid range for ") + what);
}

double draw(std::uniform_real_distribution<double>& d, Rng& rng) { return d(rng); }

}  // namespace

Task generate_task(const WorkloadConfig& config, int slot, Rng& rng) {
  check_range(config.d_min_kb, config.d_max_kb, "input data size");
  check_range(config.c_min, config.c_max, "cycles per bit");
  if (config.n_min < 1 || config.n_min > config.n_max)
    throw std::invalid_argument("invalid range for SFC length");
  check_range(config.vnf_cp_min_ghz, config.vnf_cp_max_ghz, "VNF compute demand");
  check_range(config.br_min_mbps, config.br_max_mbps, "inter-VNF bandwidth");
  check_range(config.xi_min, config.xi_max, "output ratio");
  check_range(config.deadline_min_s, config.deadline_max_s, "deadline");
  check_range(config.di_min_s, config.di_max_s, "instantiation delay");

  std::uniform_real_distribution<double> d_kb(config.d_min_kb, config.d_max_kb);
  std::uniform_real_distribution<double> cycles(config.c_min, config.c_max);
  std::uniform_int_distribution<int> length(config.n_min, config.n_max);
  std::uniform_real_distribution<double> cp(config.vnf_cp_min_ghz, config.vnf_cp_max_ghz);
  std::uniform_real_distribution<double> br(config.br_min_mbps, config.br_max_mbps);
  std::uniform_real_distribution<double> xi(config.xi_min, config.xi_max);
  std::uniform_real_distribution<double> deadline(config.deadline_min_s, config.deadline_max_s);
  std::uniform_real_distribution<double> di(config.di_min_s, config.di_max_s);

  Task task;
  task.slot = slot;
  task.input_bits = draw(d_kb, rng) * kBitsPerKb;
  task.cycles_per_bit = draw(cycles, rng);
  task.deadline_s = draw(deadline, rng);

  const int n = length(rng);
  task.chain.vnfs.resize(n);
  for (int i = 0; i < n; ++i) {
    auto& f = task.chain.vnfs[i];
    f.index_in_chain = i + 1;
    f.compute_demand_ghz = draw(cp, rng);
    f.instantiation_delay_s = draw(di, rng);
    f.output_ratio = draw(xi, rng);
  }
  task.chain.inter_vnf_bandwidth_mbps.resize(n - 1);
  for (int i = 0; i + 1 < n; ++i) task.chain.inter_vnf_bandwidth_mbps[i] = draw(br, rng);
  return task;
}

double channel_gain(double distance_m, const Channel& ch) {
  if (distance_m <= 0) throw std::domain_error("channel_gain: distance must be positive");
  return ch.gain_reference *
         std::pow(distance_m / ch.reference_distance_m, -ch.pathloss_exponent);
}

double link_rate(double tx_power_w, double gain, const Channel& ch) {
  return ch.bandwidth_hz * std::log2(1.0 + tx_power_w * gain / ch.noise_power_w);
}

}  // namespace mecsim
