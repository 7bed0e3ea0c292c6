#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mecsim/environments.hpp"
#include "mecsim/neural.hpp"
#include "mecsim/random.hpp"

namespace mecsim {

/// Bounded ring buffer; oldest transitions evicted first.
template <typename T>
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {}

  void push(T transition) {
    if (data_.size() < capacity_) {
      data_.push_back(std::move(transition));
    } else {
      data_[head_] = std::move(transition);
      head_ = (head_ + 1) % capacity_;
    }
  }

  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  const T& at(std::size_t i) const { return data_[i]; }

  /// Uniform sample without replacement within one batch.
  std::vector<const T*> sample(std::size_t batch, Rng& rng) const {
    if (batch > data_.size()) throw std::logic_error("replay sample larger than buffer");
    std::vector<std::size_t> idx(data_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::vector<const T*> out;
    out.reserve(batch);
    for (std::size_t i = 0; i < batch; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
      std::swap(idx[i], idx[pick(rng)]);
      out.push_back(&data_[idx[i]]);
    }
    return out;
  }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::vector<T> data_;
};

struct UpdateDiagnostics {
  bool updated = false;  // false while the buffer is warming up
  double critic1_loss = 0.0;
  double critic2_loss = 0.0;
  bool actor_updated = false;
  double actor_objective = 0.0;  // mean Q under the current policy
  double loss = 0.0;             // DDQN
  bool target_synced = false;    // DDQN
};

struct Td3Settings {
  enum class Mode { kTd3, kDdpg };
  Mode mode = Mode::kTd3;
  double learning_rate = 1e-3;
  double gamma = 0.99;
  double tau = 0.005;
  double exploration_sigma = 0.1;
  double target_sigma = 0.2;      // sigma~, smoothing noise
  double noise_clip = 0.5;        // c
  int policy_delay = 2;           // N_d
  int batch_size = 128;
  std::vector<int> hidden{64, 64, 64, 64};

  /// DDPG ablation: single critic, no smoothing noise, no delay.
  static Td3Settings ddpg(Td3Settings base = {}) {
    base.mode = Mode::kDdpg;
    base.target_sigma = 0.0;
    base.noise_clip = 0.0;
    base.policy_delay = 1;
    return base;
  }
};

/// Continuous task-partition agent: sigmoid-head actor, twin critics, target
/// networks with soft updates and delayed policy steps.
class Td3Agent {
 public:
  Td3Agent(int state_dim, const Td3Settings& settings, Rng& init_rng);

  /// clip(pi(s) + noise, 0, 1); noise only when exploring.
  double select_action(std::span<const double> state, bool explore, Rng& rng) const;

  /// Target values y for a batch; terminal transitions bootstrap nothing.
  std::vector<double> targets(const std::vector<const MdTransition*>& batch, Rng& rng) const;

  UpdateDiagnostics update(ReplayBuffer<MdTransition>& buffer, Rng& rng);

  const Td3Settings& settings() const { return settings_; }
  int update_count() const { return updates_; }
  const DenseNet& actor() const { return actor_; }
  const DenseNet& critic1() const { return critic1_; }
  const DenseNet& critic2() const { return critic2_; }
  const DenseNet& actor_target() const { return actor_target_; }
  const DenseNet& critic1_target() const { return critic1_target_; }
  const DenseNet& critic2_target() const { return critic2_target_; }

  void save(const std::filesystem::path& dir) const;
  void load(const std::filesystem::path& dir);

 private:
  std::vector<double> critic_input(std::span<const double> state, double action) const;

  Td3Settings settings_;
  DenseNet actor_, actor_target_;
  DenseNet critic1_, critic1_target_;
  DenseNet critic2_, critic2_target_;
  AdamOptimizer actor_opt_, critic1_opt_, critic2_opt_;
  int updates_ = 0;
};

struct DdqnSettings {
  bool dueling = true;
  bool double_q = true;
  double learning_rate = 1e-3;
  double gamma = 0.99;
  double epsilon_start = 1.0;
  double epsilon_floor = 0.01;
  double epsilon_decay = 0.9995;
  int target_sync_period = 100;  // hard copy every this many updates
  int batch_size = 128;
  std::vector<int> hidden{64, 64, 64, 64};
};

/// Discrete VNF-placement agent: (dueling) DQN with optional double-Q targets
/// and an annealed epsilon-greedy policy.
class DdqnAgent {
 public:
  DdqnAgent(int state_dim, int action_count, const DdqnSettings& settings, Rng& init_rng);

  /// Epsilon-greedy over all stations; explore=false forces the argmax and
  /// leaves the schedule untouched.
  int select_action(std::span<const double> state, bool explore, Rng& rng);

  std::vector<double> targets(const std::vector<const EiTransition*>& batch) const;

  UpdateDiagnostics update(ReplayBuffer<EiTransition>& buffer, Rng& rng);

  double epsilon() const { return epsilon_; }
  int action_count() const { return actions_; }
  int update_count() const { return updates_; }
  const DdqnSettings& settings() const { return settings_; }
  const DenseNet& evaluate_net() const { return eval_; }
  const DenseNet& target_net() const { return target_; }

  void save(const std::filesystem::path& dir) const;
  void load(const std::filesystem::path& dir);

 private:
  DdqnSettings settings_;
  int actions_;
  DenseNet eval_, target_;
  AdamOptimizer opt_;
  double epsilon_;
  int updates_ = 0;
};

}  // namespace mecsim
