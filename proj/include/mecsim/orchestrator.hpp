#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mecsim/agents.hpp"
#include "mecsim/environments.hpp"

namespace mecsim {

enum class Scheme {
  kCdadrl,
  kTd3Ddqn,
  kDdpgDuel,
  kDdpgDdqn,
  kLocal,
  kEdge,
  kBinary,
  kRandom,
};

std::optional<Scheme> parse_scheme(const std::string& name);
const char* to_string(Scheme scheme);
bool scheme_is_learning(Scheme scheme);  // trains at least one agent

struct ExperimentConfig {
  TopologyConfig topology;
  WorkloadConfig workload;
  Channel channel;
  MobileDevice md;
  PricingPolicy pricing;
  CostWeights weights;
  CostNormalization normalization;
  RewardConfig reward;
  Td3Settings td3;
  DdqnSettings ddqn;
  double snap_epsilon = 0.0;
  double cp_md_state_max_ghz = 1.6;
  std::size_t buffer_capacity = 2000;

  Scheme scheme = Scheme::kCdadrl;
  int episodes = 3000;
  int slots_per_episode = 20;  // T
  std::uint64_t seed = 1;
  std::uint64_t workload_seed = 0;  // 0 -> follows `seed`
  int eval_episodes = 20;
  int checkpoint_interval = 0;  // episodes between checkpoints, 0 = final only
  std::string out_dir = "runs";

  // sweep grid
  std::vector<std::string> sweep_schemes{"cdadrl", "local", "edge", "binary", "random"};
  std::vector<double> sweep_cp_md{0.6, 0.8, 1.0, 1.2, 1.4, 1.6};
  std::vector<std::uint64_t> sweep_seeds{1, 2, 3, 4, 5};
  int workers = 1;

  std::uint64_t effective_workload_seed() const {
    return workload_seed == 0 ? seed : workload_seed;
  }
};

struct SlotLog {
  int episode = 0;
  int slot = 0;
  double x = 0.0;
  double dl = 0.0, de = 0.0, dc = 0.0, ec = 0.0, uc = 0.0, cost = 0.0;
  double r_o = 0.0;
  bool feasible = true;
  std::vector<int> placement;        // empty when x = 0
  std::vector<double> stage_rewards;  // finalized r_p per stage
};

struct EpisodeLog {
  int episode = 0;
  double cumulative_reward = 0.0;
  double mean_cost = 0.0;
  int infeasible_slots = 0;
  std::vector<SlotLog> slots;
};

class PartitionPolicy {
 public:
  virtual ~PartitionPolicy() = default;
  virtual double decide(const std::vector<double>& state, bool explore, Rng& rng) = 0;
};

struct PlacementQuery {
  const std::vector<double>& state;
  int stage = 1;  // 1-based
  const Task& task;
  double x = 0.0;
  int v_md = -1;
  const std::vector<int>& hosts_so_far;
  const EdgeInfrastructure& infra;  // live ledger
};

class PlacementPolicy {
 public:
  virtual ~PlacementPolicy() = default;
  virtual int decide(const PlacementQuery& query, bool explore, Rng& rng) = 0;
};

/// Greedy heuristic used by the Binary baseline: first feasible station that
/// minimizes the VNF's incremental processing-plus-transmission delay, ties
/// broken by the lowest station id.
class GreedyPlacementPolicy : public PlacementPolicy {
 public:
  int decide(const PlacementQuery& query, bool explore, Rng& rng) override;
};

struct RunArtifacts {
  std::vector<EpisodeLog> training;
  std::vector<EpisodeLog> evaluation;
  EdgeInfrastructure infra;
  int v_md = -1;
  std::unique_ptr<Td3Agent> partition_agent;   // null for non-learning partition
  std::unique_ptr<DdqnAgent> placement_agent;  // null for non-learning placement
};

/// Invoked every checkpoint_interval episodes (and after the last one).
using CheckpointSink = std::function<void(int episode, const RunArtifacts&)>;

/// Joint training loop for CDADRL and its ablations (scheme selects the
/// agent modes). Also handles baseline schemes via run_baseline.
RunArtifacts train_cdadrl(const ExperimentConfig& config, const CheckpointSink& sink = {});
RunArtifacts run_baseline(const ExperimentConfig& config, const CheckpointSink& sink = {});
RunArtifacts run_experiment(const ExperimentConfig& config,
                            const CheckpointSink& sink = {});  // dispatches on scheme

/// Frozen-policy evaluation: greedy/noiseless actions, no parameter updates,
/// its own deterministic workload stream.
std::vector<EpisodeLog> evaluate_policy(const RunArtifacts& artifacts,
                                        const ExperimentConfig& config, int episodes);

/// Writes agent checkpoints (when present) under dir.
void save_agents(const RunArtifacts& artifacts, const std::filesystem::path& dir);
void load_agents(RunArtifacts& artifacts, const ExperimentConfig& config,
                 const std::filesystem::path& dir);

}  // namespace mecsim
