#include "mecsim/orchestrator.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace mecsim {

std::optional<Scheme> parse_scheme(const std::string& name) {
  if (name == "cdadrl") return Scheme::kCdadrl;
  if (name == "td3-ddqn") return Scheme::kTd3Ddqn;
  if (name == "ddpg-duel") return Scheme::kDdpgDuel;
  if (name == "ddpg-ddqn") return Scheme::kDdpgDdqn;
  if (name == "local") return Scheme::kLocal;
  if (name == "edge") return Scheme::kEdge;
  if (name == "binary") return Scheme::kBinary;
  if (name == "random") return Scheme::kRandom;
  return std::nullopt;
}

const char* to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kCdadrl: return "cdadrl";
    case Scheme::kTd3Ddqn: return "td3-ddqn";
    case Scheme::kDdpgDuel: return "ddpg-duel";
    case Scheme::kDdpgDdqn: return "ddpg-ddqn";
    case Scheme::kLocal: return "local";
    case Scheme::kEdge: return "edge";
    case Scheme::kBinary: return "binary";
    case Scheme::kRandom: return "random";
  }
  return "?";
}

bool scheme_is_learning(Scheme scheme) {
  switch (scheme) {
    case Scheme::kCdadrl:
    case Scheme::kTd3Ddqn:
    case Scheme::kDdpgDuel:
    case Scheme::kDdpgDdqn:
    case Scheme::kEdge:
      return true;
    default:
      return false;
  }
}

namespace {

StateEncodingConfig make_encoding(const ExperimentConfig& cfg,
                                  const EdgeInfrastructure& infra) {
  StateEncodingConfig enc;
  enc.n_max = cfg.workload.n_max;
  enc.d_max_bits = cfg.workload.d_max_kb * kBitsPerKb;
  enc.c_max = cfg.workload.c_max;
  enc.deadline_max_s = cfg.workload.deadline_max_s;
  enc.cp_md_max_ghz = cfg.cp_md_state_max_ghz;
  enc.vnf_cp_max_ghz = cfg.workload.vnf_cp_max_ghz;
  enc.br_max_mbps = cfg.workload.br_max_mbps;
  enc.cp_v_max_ghz = cfg.topology.cp_max_ghz;
  enc.bw_max_mbps = cfg.topology.bw_max_mbps;
  enc.station_count = infra.station_count();
  enc.link_count = infra.link_count();
  return enc;
}

class Td3Partition : public PartitionPolicy {
 public:
  explicit Td3Partition(Td3Agent* agent) : agent_(agent) {}
  double decide(const std::vector<double>& state, bool explore, Rng& rng) override {
    return agent_->select_action(state, explore, rng);
  }

 private:
  Td3Agent* agent_;
};

class FixedPartition : public PartitionPolicy {
 public:
  explicit FixedPartition(double x) : x_(x) {}
  double decide(const std::vector<double>&, bool, Rng&) override { return x_; }

 private:
  double x_;
};

class BinaryPartition : public PartitionPolicy {
 public:
  double decide(const std::vector<double>&, bool, Rng& rng) override {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    return u01(rng) < 0.5 ? 0.0 : 1.0;
  }
};

class UniformPartition : public PartitionPolicy {
 public:
  double decide(const std::vector<double>&, bool, Rng& rng) override {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    return u01(rng);
  }
};

class DdqnPlacement : public PlacementPolicy {
 public:
  explicit DdqnPlacement(DdqnAgent* agent) : agent_(agent) {}
  int decide(const PlacementQuery& query, bool explore, Rng& rng) override {
    return agent_->select_action(query.state, explore, rng);
  }

 private:
  DdqnAgent* agent_;
};

class RandomPlacement : public PlacementPolicy {
 public:
  int decide(const PlacementQuery& query, bool, Rng& rng) override {
    std::uniform_int_distribution<int> pick(0, query.infra.station_count() - 1);
    return pick(rng);
  }
};

struct Policies {
  std::unique_ptr<PartitionPolicy> partition;
  std::unique_ptr<PlacementPolicy> placement;
};

Policies make_policies(const ExperimentConfig& cfg, RunArtifacts& art) {
  Policies p;
  switch (cfg.scheme) {
    case Scheme::kCdadrl:
    case Scheme::kTd3Ddqn:
    case Scheme::kDdpgDuel:
    case Scheme::kDdpgDdqn:
      p.partition = std::make_unique<Td3Partition>(art.partition_agent.get());
      p.placement = std::make_unique<DdqnPlacement>(art.placement_agent.get());
      break;
    case Scheme::kLocal:
      p.partition = std::make_unique<FixedPartition>(0.0);
      p.placement = std::make_unique<RandomPlacement>();  // never consulted
      break;
    case Scheme::kEdge:
      p.partition = std::make_unique<FixedPartition>(1.0);
      p.placement = std::make_unique<DdqnPlacement>(art.placement_agent.get());
      break;
    case Scheme::kBinary:
      p.partition = std::make_unique<BinaryPartition>();
      p.placement = std::make_unique<GreedyPlacementPolicy>();
      break;
    case Scheme::kRandom:
      p.partition = std::make_unique<UniformPartition>();
      p.placement = std::make_unique<RandomPlacement>();
      break;
  }
  return p;
}

void make_agents(const ExperimentConfig& cfg, RunArtifacts& art,
                 const StateEncodingConfig& enc) {
  Rng init_rng = make_rng(cfg.seed, "agent-init");
  Td3Settings td3 = cfg.td3;
  DdqnSettings ddqn = cfg.ddqn;
  switch (cfg.scheme) {
    case Scheme::kCdadrl:
      break;
    case Scheme::kTd3Ddqn:
      ddqn.dueling = false;
      break;
    case Scheme::kDdpgDuel:
      td3 = Td3Settings::ddpg(td3);
      break;
    case Scheme::kDdpgDdqn:
      td3 = Td3Settings::ddpg(td3);
      ddqn.dueling = false;
      break;
    case Scheme::kEdge:  // plain DQN placement
      ddqn.dueling = false;
      ddqn.double_q = false;
      break;
    default:
      return;  // non-learning baselines
  }
  if (cfg.scheme != Scheme::kEdge)
    art.partition_agent =
        std::make_unique<Td3Agent>(enc.md_state_dim(), td3, init_rng);
  art.placement_agent = std::make_unique<DdqnAgent>(enc.ei_state_dim(),
                                                    enc.station_count, ddqn, init_rng);
}

struct Harness {
  const ExperimentConfig& cfg;
  RunArtifacts& art;
  MdEnvironment md_env;
  EiEnvironment ei_env;
  double uplink_bps;
  double downlink_bps;
  Policies policies;
  ReplayBuffer<MdTransition> md_buffer;
  ReplayBuffer<EiTransition> ei_buffer;
  Rng action_rng;
  Rng update_rng;

  Harness(const ExperimentConfig& c, RunArtifacts& a, const StateEncodingConfig& enc)
      : cfg(c),
        art(a),
        md_env{c.md, c.weights, c.normalization, enc, c.reward.rho, c.snap_epsilon},
        ei_env(&a.infra, enc, c.reward, c.pricing, c.md),
        policies(make_policies(c, a)),
        md_buffer(c.buffer_capacity),
        ei_buffer(c.buffer_capacity),
        action_rng(make_rng(c.seed, "actions")),
        update_rng(make_rng(c.seed, "updates")) {
    const int v_md = a.v_md;
    const double gain =
        channel_gain(a.infra.stations[v_md].distance_to_md, c.channel);
    uplink_bps = link_rate(c.channel.md_tx_power_w, gain, c.channel);
    downlink_bps = link_rate(a.infra.stations[v_md].tx_power, gain, c.channel);
  }

  EpisodeLog run_episode(int episode, bool training, Rng& rng) {
    const int slots = cfg.slots_per_episode;
    Rng task_rng = make_rng(cfg.effective_workload_seed(),
                            training ? "tasks" : "eval-tasks", episode);
    std::vector<Task> tasks;
    tasks.reserve(slots);
    for (int t = 1; t <= slots; ++t)
      tasks.push_back(generate_task(cfg.workload, t, task_rng));

    EpisodeLog log;
    log.episode = episode;
    log.slots.reserve(slots);

    for (int t = 1; t <= slots; ++t) {
      const Task& task = tasks[t - 1];
      const bool terminal = t == slots;

      PartitionFn partition_fn = [&](const std::vector<double>& state) {
        return policies.partition->decide(state, training, rng);
      };
      PlacementFn placement_fn = [&](const std::vector<double>& ei_state, int stage) {
        PlacementQuery query{ei_state,
                             stage,
                             ei_env.task(),
                             ei_env.offload_ratio(),
                             ei_env.access_station(),
                             ei_env.placement().host_per_vnf,
                             ei_env.infra()};
        return policies.placement->decide(query, training, rng);
      };

      SlotOutcome out = exchange(md_env, ei_env, task, uplink_bps, downlink_bps, art.v_md,
                                 partition_fn, placement_fn, terminal);

      if (training) {
        if (art.partition_agent) {
          MdTransition tr;
          tr.state = out.md_state;
          tr.action = out.x;
          tr.reward = out.r_o;
          tr.next_state = terminal ? std::vector<double>(out.md_state.size(), 0.0)
                                   : md_observe(tasks[t], md_env.md, md_env.encoding);
          tr.terminal = terminal;
          md_buffer.push(std::move(tr));
          art.partition_agent->update(md_buffer, update_rng);
        }
        if (art.placement_agent && !out.ei_transitions.empty()) {
          for (auto& tr : out.ei_transitions) ei_buffer.push(tr);
          for (std::size_t i = 0; i < out.ei_transitions.size(); ++i)
            art.placement_agent->update(ei_buffer, update_rng);
        }
      }

      SlotLog sl;
      sl.episode = episode;
      sl.slot = t;
      sl.x = out.x;
      sl.dl = out.result.local_delay_s;
      sl.de = out.result.edge_delay_s;
      sl.dc = out.result.execution_delay_s;
      sl.ec = out.result.md_energy_j;
      sl.uc = out.result.usage_charge;
      sl.cost = out.result.cost;
      sl.r_o = out.r_o;
      sl.feasible = out.result.flags.all_ok();
      if (out.placement) sl.placement = out.placement->host_per_vnf;
      for (const auto& tr : out.ei_transitions) sl.stage_rewards.push_back(tr.reward);
      log.cumulative_reward += out.r_o;
      log.mean_cost += out.result.cost;
      if (!sl.feasible) ++log.infeasible_slots;
      log.slots.push_back(std::move(sl));
    }
    log.mean_cost /= slots;
    return log;
  }
};

void validate(const ExperimentConfig& cfg) {
  if (cfg.episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (cfg.slots_per_episode < 1) throw std::invalid_argument("T must be >= 1");
  if (cfg.eval_episodes < 0) throw std::invalid_argument("eval_episodes must be >= 0");
  const double wsum = cfg.weights.delay + cfg.weights.energy + cfg.weights.charge;
  if (cfg.weights.delay < 0 || cfg.weights.energy < 0 || cfg.weights.charge < 0 ||
      std::abs(wsum - 1.0) > 1e-9)
    throw std::invalid_argument("cost weights must be non-negative and sum to 1");
}

RunArtifacts run_common(const ExperimentConfig& cfg, const CheckpointSink& sink) {
  validate(cfg);
  RunArtifacts art;
  Rng topo_rng = make_rng(cfg.effective_workload_seed(), "topology");
  art.infra = build_infrastructure(cfg.topology, topo_rng);
  art.v_md = art.infra.closest_station();

  const StateEncodingConfig enc = make_encoding(cfg, art.infra);
  make_agents(cfg, art, enc);

  Harness harness(cfg, art, enc);
  art.training.reserve(cfg.episodes);
  for (int e = 1; e <= cfg.episodes; ++e) {
    art.training.push_back(harness.run_episode(e, true, harness.action_rng));
    if (sink && cfg.checkpoint_interval > 0 && e % cfg.checkpoint_interval == 0 &&
        e != cfg.episodes)
      sink(e, art);
  }
  if (sink) sink(cfg.episodes, art);

  art.evaluation = evaluate_policy(art, cfg, cfg.eval_episodes);
  return art;
}

}  // namespace

RunArtifacts train_cdadrl(const ExperimentConfig& cfg, const CheckpointSink& sink) {
  switch (cfg.scheme) {
    case Scheme::kCdadrl:
    case Scheme::kTd3Ddqn:
    case Scheme::kDdpgDuel:
    case Scheme::kDdpgDdqn:
      return run_common(cfg, sink);
    default:
      throw std::invalid_argument("train_cdadrl requires a dual-agent scheme");
  }
}

RunArtifacts run_baseline(const ExperimentConfig& cfg, const CheckpointSink& sink) {
  switch (cfg.scheme) {
    case Scheme::kLocal:
    case Scheme::kEdge:
    case Scheme::kBinary:
    case Scheme::kRandom:
      return run_common(cfg, sink);
    default:
      throw std::invalid_argument("run_baseline requires a baseline scheme");
  }
}

RunArtifacts run_experiment(const ExperimentConfig& cfg, const CheckpointSink& sink) {
  return run_common(cfg, sink);
}

std::vector<EpisodeLog> evaluate_policy(const RunArtifacts& artifacts,
                                        const ExperimentConfig& cfg, int episodes) {
  // The harness mutates nothing during evaluation: no pushes, no updates, and
  // greedy/noiseless action selection (sigma and epsilon paths are bypassed).
  RunArtifacts& art = const_cast<RunArtifacts&>(artifacts);
  const StateEncodingConfig enc = make_encoding(cfg, art.infra);
  Harness harness(cfg, art, enc);
  Rng eval_rng = make_rng(cfg.seed, "eval-actions");
  std::vector<EpisodeLog> logs;
  logs.reserve(episodes);
  for (int e = 1; e <= episodes; ++e)
    logs.push_back(harness.run_episode(e, false, eval_rng));
  return logs;
}

int GreedyPlacementPolicy::decide(const PlacementQuery& query, bool, Rng&) {
  const Task& task = query.task;
  const ServiceChain& chain = task.chain;
  const int n = chain.size();
  const int i = query.stage;
  const auto& f = chain.vnfs[i - 1];
  const double offloaded_bits = query.x * task.input_bits;
  const double processing_s =
      chain.output_ratio_before(i) * offloaded_bits * task.cycles_per_bit /
      (f.compute_demand_ghz * kCyclesPerGhz);

  int best = -1;
  double best_score = std::numeric_limits<double>::infinity();
  for (int v = 0; v < query.infra.station_count(); ++v) {
    const RoutePath inbound = i == 1
                                  ? shortest_path(query.infra, query.v_md, v)
                                  : shortest_path(query.infra, query.hosts_so_far[i - 2], v);
    bool feasible = f.compute_demand_ghz <= query.infra.stations[v].compute_available;
    if (i >= 2) {
      feasible = feasible && chain.inter_vnf_bandwidth_mbps[i - 2] <=
                                 path_min_bandwidth(query.infra, inbound);
    }
    if (!feasible) continue;

    double score = processing_s;
    if (i == 1) {
      for (int li : inbound.links)
        score += offloaded_bits / (query.infra.links[li].bandwidth_available * kBpsPerMbps);
    } else {
      score += chain.vnfs[i - 2].output_ratio * offloaded_bits /
               (chain.inter_vnf_bandwidth_mbps[i - 2] * kBpsPerMbps);
    }
    if (i == n) {
      const RoutePath outbound = shortest_path(query.infra, v, query.v_md);
      for (int li : outbound.links)
        score += chain.last_output_ratio() * offloaded_bits /
                 (query.infra.links[li].bandwidth_available * kBpsPerMbps);
    }
    if (score < best_score) {
      best_score = score;
      best = v;
    }
  }
  return best >= 0 ? best : 0;  // no feasible station: take BS 0, penalties follow
}

void save_agents(const RunArtifacts& artifacts, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  if (artifacts.partition_agent) artifacts.partition_agent->save(dir);
  if (artifacts.placement_agent) artifacts.placement_agent->save(dir);
}

void load_agents(RunArtifacts& artifacts, const ExperimentConfig& cfg,
                 const std::filesystem::path& dir) {
  const StateEncodingConfig enc = make_encoding(cfg, artifacts.infra);
  make_agents(cfg, artifacts, enc);
  if (artifacts.partition_agent) artifacts.partition_agent->load(dir);
  if (artifacts.placement_agent) artifacts.placement_agent->load(dir);
}

}  // namespace mecsim
