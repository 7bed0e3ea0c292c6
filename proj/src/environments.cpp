#include "mecsim/environments.hpp"

#include <algorithm>
#include <stdexcept>

namespace mecsim {

std::vector<double> md_observe(const Task& task, const MobileDevice& md,
                               const StateEncodingConfig& enc) {
  std::vector<double> s;
  s.reserve(enc.md_state_dim());
  const int n = task.chain.size();
  s.push_back(static_cast<double>(n) / enc.n_max);
  for (int i = 0; i < enc.n_max; ++i)
    s.push_back(i < n ? task.chain.vnfs[i].compute_demand_ghz / enc.vnf_cp_max_ghz : 0.0);
  for (int i = 0; i + 1 < enc.n_max; ++i)
    s.push_back(i < n - 1 ? task.chain.inter_vnf_bandwidth_mbps[i] / enc.br_max_mbps : 0.0);
  s.push_back(task.input_bits / enc.d_max_bits);
  s.push_back(task.cycles_per_bit / enc.c_max);
  s.push_back(task.deadline_s / enc.deadline_max_s);
  s.push_back(md.compute_capacity_ghz / enc.cp_md_max_ghz);
  return s;
}

double md_reward(const SlotResult& result, double rho) {
  return result.flags.all_ok() ? -result.cost : -rho;
}

EiEnvironment::EiEnvironment(EdgeInfrastructure* infra, StateEncodingConfig enc,
                             RewardConfig reward, PricingPolicy pricing, MobileDevice md)
    : infra_(infra), enc_(std::move(enc)), reward_(reward), pricing_(pricing), md_(md) {
  enc_.station_count = infra_->station_count();
  enc_.link_count = infra_->link_count();
}

int EiEnvironment::chain_length() const { return task_.chain.size(); }

void EiEnvironment::begin_slot(const Task& task, double x, int v_md, double uplink_bps,
                               double downlink_bps, bool slot_is_terminal) {
  if (active_) throw std::logic_error("EI environment: previous slot not ended");
  if (x <= 0.0) throw std::logic_error("EI environment invoked with x = 0");
  task_ = task;
  x_ = x;
  v_md_ = v_md;
  up_bps_ = uplink_bps;
  down_bps_ = downlink_bps;
  terminal_slot_ = slot_is_terminal;
  stage_ = 1;
  snapshot_ = *infra_;
  placement_ = PlacementRecord{};
  placement_.access_station = v_md;
  placement_.segment_paths.resize(task.chain.size() + 1);
  receipt_ = ReservationReceipt{};
  staging_.clear();
  penalties_.assign(task.chain.size(), 0.0);
  edge_flags_ = FeasibilityFlags{};
  active_ = true;
}

std::vector<double> EiEnvironment::encode_state(int placed_count) const {
  std::vector<double> s;
  s.reserve(enc_.ei_state_dim());
  const int n = task_.chain.size();
  s.push_back(static_cast<double>(n) / enc_.n_max);
  for (int i = 0; i < enc_.n_max; ++i)
    s.push_back(i < n ? task_.chain.vnfs[i].compute_demand_ghz / enc_.vnf_cp_max_ghz : 0.0);
  for (int i = 0; i + 1 < enc_.n_max; ++i)
    s.push_back(i < n - 1 ? task_.chain.inter_vnf_bandwidth_mbps[i] / enc_.br_max_mbps
                          : 0.0);
  s.push_back(task_.input_bits / enc_.d_max_bits);
  s.push_back(task_.deadline_s / enc_.deadline_max_s);
  for (int v = 0; v < enc_.station_count; ++v) s.push_back(v == v_md_ ? 1.0 : 0.0);
  s.push_back(x_);
  // Placement vector L, -1 sentinel for unplaced entries mapped onto 0.
  for (int i = 0; i < enc_.n_max; ++i) {
    int host = (i < placed_count) ? placement_.host_per_vnf[i] : -1;
    s.push_back(static_cast<double>(host + 1) / enc_.station_count);
  }
  for (const auto& st : infra_->stations)
    s.push_back(st.compute_available / enc_.cp_v_max_ghz);
  for (const auto& l : infra_->links)
    s.push_back(l.bandwidth_available / enc_.bw_max_mbps);
  return s;
}

std::vector<double> EiEnvironment::observe() const {
  if (!active_) throw std::logic_error("EI environment: no active slot");
  if (stage_ > chain_length()) throw std::logic_error("EI environment: chain fully placed");
  return encode_state(stage_ - 1);
}

EiEnvironment::StageStep EiEnvironment::step(int station) {
  if (!active_) throw std::logic_error("EI environment: no active slot");
  const int n = chain_length();
  if (stage_ > n) throw std::logic_error("EI environment: chain fully placed");
  if (station < 0 || station >= infra_->station_count())
    throw std::out_of_range("EI environment: station id out of range");

  const int i = stage_;
  std::vector<double> state = encode_state(i - 1);
  placement_.host_per_vnf.push_back(station);

  if (i == 1) {
    placement_.segment_paths[0] = shortest_path(*infra_, v_md_, station);
  } else {
    placement_.segment_paths[i - 1] =
        shortest_path(*infra_, placement_.host_per_vnf[i - 2], station);
  }
  if (i == n) placement_.segment_paths[n] = shortest_path(*infra_, station, v_md_);

  double penalty = 0.0;
  const auto& f = task_.chain.vnfs[i - 1];
  if (!try_reserve_compute(*infra_, station, f.compute_demand_ghz, receipt_)) {
    penalty += reward_.mu5;
    edge_flags_[Constraint::C5] = false;
  }
  if (i >= 2) {
    const double br = task_.chain.inter_vnf_bandwidth_mbps[i - 2];
    if (!try_reserve_flow(*infra_, placement_.segment_paths[i - 1], br, receipt_)) {
      penalty += reward_.mu6;
      edge_flags_[Constraint::C6] = false;
    }
  }
  penalties_[i - 1] = penalty;

  EiTransition tr;
  tr.state = std::move(state);
  tr.action = station;
  tr.reward = -penalty;  // R_reward joins at the final stage, DUR handles the rest
  tr.next_state = encode_state(i);
  tr.terminal = false;
  staging_.transitions.push_back(std::move(tr));

  ++stage_;
  return StageStep{stage_ > n, penalty};
}

EdgeResults EiEnvironment::finalize() {
  if (!active_) throw std::logic_error("EI environment: no active slot");
  const int n = chain_length();
  if (stage_ <= n) throw std::logic_error("EI environment: chain not fully placed");
  if (staging_.finalized) throw std::logic_error("EI environment: slot already finalized");

  // Physics against the slot-start availabilities.
  EdgeOutcome outcome =
      evaluate_edge(task_, x_, placement_, up_bps_, down_bps_, snapshot_, md_, pricing_);

  if (outcome.edge_delay_s > task_.deadline_s) {
    penalties_[n - 1] += reward_.mu7;
    edge_flags_[Constraint::C7] = false;
  }

  const double final_reward_component =
      reward_.wp_delay * outcome.edge_delay_s + reward_.wp_charge * outcome.usage_charge;
  staging_.transitions[n - 1].reward = -(final_reward_component + penalties_[n - 1]);
  apply_dur(staging_, n, final_reward_component);
  if (terminal_slot_) staging_.transitions[n - 1].terminal = true;

  EdgeResults results;
  results.edge_delay_s = outcome.edge_delay_s;
  results.edge_energy_j = outcome.energy.total_j;
  results.usage_charge = outcome.usage_charge;
  results.flags = edge_flags_;
  return results;
}

void EiEnvironment::end_slot() {
  if (!active_) throw std::logic_error("EI environment: no active slot");
  if (!receipt_.released) release_slot(*infra_, receipt_);
  active_ = false;
}

void apply_dur(StagedTransitionBuffer& buffer, int chain_length,
               double final_reward_component) {
  if (buffer.finalized) throw std::logic_error("apply_dur: buffer already finalized");
  if (static_cast<int>(buffer.size()) != chain_length)
    throw std::logic_error("apply_dur: staged buffer incomplete");
  for (int i = 0; i + 1 < chain_length; ++i)
    buffer.transitions[i].reward -= final_reward_component;
  buffer.finalized = true;
}

SlotOutcome exchange(const MdEnvironment& md_env, EiEnvironment& ei_env, const Task& task,
                     double uplink_bps, double downlink_bps, int v_md,
                     const PartitionFn& partition, const PlacementFn& placement,
                     bool slot_is_terminal) {
  SlotOutcome out;
  out.md_state = md_observe(task, md_env.md, md_env.encoding);

  double x = partition(out.md_state);
  if (md_env.snap_epsilon > 0.0) {
    if (x <= md_env.snap_epsilon) x = 0.0;
    if (x >= 1.0 - md_env.snap_epsilon) x = 1.0;
  }
  out.x = x;
  out.messages.emplace_back(OffloadRatio{x});

  const bool x_valid = x >= 0.0 && x <= 1.0;

  bool c4_ok = true;
  for (const auto& f : task.chain.vnfs)
    c4_ok = c4_ok && f.compute_demand_ghz <= md_env.md.compute_capacity_ghz;

  double dl = 0.0, el = 0.0;
  std::optional<GroupPartition> partition_result;
  if (x_valid && x < 1.0 && c4_ok) {
    partition_result = partition_into_groups(task.chain, md_env.md);
    dl = local_delay(task, x, *partition_result);
    el = local_energy(task, x, md_env.md);
  }

  EdgeResults edge_results;
  if (x_valid && x > 0.0) {
    ei_env.begin_slot(task, x, v_md, uplink_bps, downlink_bps, slot_is_terminal);
    for (int i = 1; i <= task.chain.size(); ++i) {
      std::vector<double> ei_state = ei_env.observe();
      int station = placement(ei_state, i);
      ei_env.step(station);
    }
    edge_results = ei_env.finalize();
    out.ei_transitions = ei_env.staged().transitions;
    out.placement = ei_env.placement();
    out.stage_penalties = ei_env.stage_penalties();
  }
  out.messages.emplace_back(edge_results);

  out.result = task_cost(dl, el, edge_results.edge_delay_s, edge_results.edge_energy_j,
                         edge_results.usage_charge, md_env.weights, md_env.normalization);
  if (x_valid) {
    const EdgeInfrastructure& ledger =
        (x > 0.0) ? ei_env.slot_start_infra() : ei_env.infra();
    out.result.flags = check_constraints(task, x, out.placement ? &*out.placement : nullptr,
                                         partition_result ? &*partition_result : nullptr, dl,
                                         edge_results.edge_delay_s, ledger, md_env.md);
    if (!c4_ok && x < 1.0) out.result.flags[Constraint::C4] = false;
  } else {
    out.result.flags[Constraint::C1] = false;
  }

  out.r_o = md_reward(out.result, md_env.rho);

  if (x_valid && x > 0.0) ei_env.end_slot();
  return out;
}

}  // namespace mecsim
