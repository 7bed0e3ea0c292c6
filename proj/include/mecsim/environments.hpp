#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "mecsim/cost.hpp"
#include "mecsim/edge_exec.hpp"
#include "mecsim/local_exec.hpp"
#include "mecsim/topology.hpp"
#include "mecsim/workload.hpp"

namespace mecsim {

/// Normalization maxima for the state encodings. Chain summaries are padded
/// to n_max compute slots and n_max-1 bandwidth slots.
struct StateEncodingConfig {
  int n_max = 5;
  double d_max_bits = 1000.0 * kBitsPerKb;
  double c_max = 1000.0;
  double deadline_max_s = 35.0;
  double cp_md_max_ghz = 1.6;  // sweep upper bound
  double vnf_cp_max_ghz = 0.5;
  double br_max_mbps = 10.0;
  double cp_v_max_ghz = 6.0;
  double bw_max_mbps = 100.0;
  int station_count = 10;
  int link_count = 0;

  int md_state_dim() const { return 2 * n_max + 4; }
  int ei_state_dim() const { return 3 * n_max + 3 + 2 * station_count + link_count; }
};

struct MdTransition {
  std::vector<double> state;
  double action = 0.0;
  double reward = 0.0;
  std::vector<double> next_state;
  bool terminal = false;
};

struct EiTransition {
  std::vector<double> state;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  bool terminal = false;
};

/// Per-slot staging buffer for EI transitions (cleared each slot).
struct StagedTransitionBuffer {
  std::vector<EiTransition> transitions;
  bool finalized = false;

  std::size_t size() const { return transitions.size(); }
  void clear() {
    transitions.clear();
    finalized = false;
  }
};

struct OffloadRatio {
  double x = 0.0;
};

struct EdgeResults {
  double edge_delay_s = 0.0;
  double edge_energy_j = 0.0;
  double usage_charge = 0.0;
  FeasibilityFlags flags;  // C2/C5/C6/C7 as seen by the EI side
};

using ExchangeMessage = std::variant<OffloadRatio, EdgeResults>;

/// Penalty weights for the EI reward and the MD infeasibility penalty.
struct RewardConfig {
  double rho = 100.0;  // MD-side penalty
  double mu5 = 100.0;
  double mu6 = 100.0;
  double mu7 = 100.0;
  double wp_delay = 0.5;   // omega_p1
  double wp_charge = 0.5;  // omega_p2
};

std::vector<double> md_observe(const Task& task, const MobileDevice& md,
                               const StateEncodingConfig& enc);

/// -Cost when all of C1..C7 hold, else -rho.
double md_reward(const SlotResult& result, double rho);

/// Parameter bundle for the MD side of the exchange.
struct MdEnvironment {
  MobileDevice md;
  CostWeights weights;
  CostNormalization normalization;
  StateEncodingConfig encoding;
  double rho = 100.0;
  double snap_epsilon = 0.0;  // x within eps of 0/1 snaps to the boundary
};

/// Stage-by-stage EI environment for one slot. Owns no resources beyond the
/// borrowed infrastructure ledger; reservations are released in end_slot().
class EiEnvironment {
 public:
  EiEnvironment(EdgeInfrastructure* infra, StateEncodingConfig enc, RewardConfig reward,
                PricingPolicy pricing, MobileDevice md);

  /// Starts the placement process for a slot with x > 0.
  void begin_slot(const Task& task, double x, int v_md, double uplink_bps,
                  double downlink_bps, bool slot_is_terminal);

  bool slot_active() const { return active_; }
  int stage() const { return stage_; }
  int chain_length() const;

  /// Encoded EI state at the current stage. Throws when no slot is active.
  std::vector<double> observe() const;

  struct StageStep {
    bool slot_complete = false;
    double stage_penalty = 0.0;  // R_penalty for this stage
  };

  /// Places the current VNF on `station`, reserving resources when feasible.
  /// Infeasible actions accrue penalties, never throw.
  StageStep step(int station);

  /// After all N stages: computes DE/EE/UC, applies the delayed update to the
  /// staged rewards and returns the results message for the MD environment.
  EdgeResults finalize();

  const StagedTransitionBuffer& staged() const { return staging_; }
  StagedTransitionBuffer& staged() { return staging_; }
  const PlacementRecord& placement() const { return placement_; }
  const std::vector<double>& stage_penalties() const { return penalties_; }
  double offload_ratio() const { return x_; }
  const Task& task() const { return task_; }
  int access_station() const { return v_md_; }

  /// Releases every reservation made during the slot.
  void end_slot();

  const EdgeInfrastructure& infra() const { return *infra_; }
  const EdgeInfrastructure& slot_start_infra() const { return snapshot_; }

 private:
  std::vector<double> encode_state(int next_stage) const;

  EdgeInfrastructure* infra_;
  StateEncodingConfig enc_;
  RewardConfig reward_;
  PricingPolicy pricing_;
  MobileDevice md_;

  bool active_ = false;
  bool terminal_slot_ = false;
  int stage_ = 0;  // 1-based index of the VNF being placed next
  Task task_;
  double x_ = 0.0;
  int v_md_ = -1;
  double up_bps_ = 0.0;
  double down_bps_ = 0.0;
  EdgeInfrastructure snapshot_;  // slot-start availabilities for the physics
  PlacementRecord placement_;
  ReservationReceipt receipt_;
  StagedTransitionBuffer staging_;
  std::vector<double> penalties_;
  FeasibilityFlags edge_flags_;
};

/// DUR: subtracts the final-stage reward component from every non-final
/// staged reward. Throws when the buffer is incomplete for `chain_length`.
void apply_dur(StagedTransitionBuffer& buffer, int chain_length,
               double final_reward_component);

/// Everything the orchestrator needs back from one slot.
struct SlotOutcome {
  std::vector<double> md_state;
  double x = 0.0;
  SlotResult result;
  double r_o = 0.0;
  std::vector<EiTransition> ei_transitions;  // finalized, ready for B_p
  std::optional<PlacementRecord> placement;
  std::vector<double> stage_penalties;
  std::vector<ExchangeMessage> messages;  // exchange trace, for contract checks
};

using PartitionFn = std::function<double(const std::vector<double>& md_state)>;
using PlacementFn = std::function<int(const std::vector<double>& ei_state, int stage)>;

/// Runs one slot's exchange: MD emits x, the EI places all N VNFs when x > 0
/// and answers with EdgeResults, the MD settles cost and reward. Ledger
/// reservations are released before returning.
SlotOutcome exchange(const MdEnvironment& md_env, EiEnvironment& ei_env, const Task& task,
                     double uplink_bps, double downlink_bps, int v_md,
                     const PartitionFn& partition, const PlacementFn& placement,
                     bool slot_is_terminal);

}  // namespace mecsim
