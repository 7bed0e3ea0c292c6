#include "mecsim/agents.hpp"

#include <algorithm>
#include <cmath>

namespace mecsim {

namespace {

double clip(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

double gaussian(double sigma, Rng& rng) {
  if (sigma <= 0.0) return 0.0;
  std::normal_distribution<double> noise(0.0, sigma);
  return noise(rng);
}

int argmax(const std::vector<double>& values) {
  return static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
}

}  // namespace

Td3Agent::Td3Agent(int state_dim, const Td3Settings& settings, Rng& init_rng)
    : settings_(settings) {
  NetConfig actor_cfg{state_dim, settings.hidden, Head::kSigmoid, 1};
  NetConfig critic_cfg{state_dim + 1, settings.hidden, Head::kLinear, 1};
  actor_ = DenseNet(actor_cfg, init_rng);
  critic1_ = DenseNet(critic_cfg, init_rng);
  critic2_ = DenseNet(critic_cfg, init_rng);
  actor_target_ = actor_;
  critic1_target_ = critic1_;
  critic2_target_ = critic2_;
  AdamConfig adam{settings.learning_rate, 0.9, 0.999, 1e-8};
  actor_opt_ = AdamOptimizer(actor_.param_count(), adam);
  critic1_opt_ = AdamOptimizer(critic1_.param_count(), adam);
  critic2_opt_ = AdamOptimizer(critic2_.param_count(), adam);
}

std::vector<double> Td3Agent::critic_input(std::span<const double> state, double action) const {
  std::vector<double> in(state.begin(), state.end());
  in.push_back(action);
  return in;
}

double Td3Agent::select_action(std::span<const double> state, bool explore, Rng& rng) const {
  double a = actor_.forward(state)[0];
  if (explore) a += gaussian(settings_.exploration_sigma, rng);
  return clip(a, 0.0, 1.0);
}

std::vector<double> Td3Agent::targets(const std::vector<const MdTransition*>& batch,
                                      Rng& rng) const {
  std::vector<double> y(batch.size());
  const bool twin = settings_.mode == Td3Settings::Mode::kTd3;
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const auto& tr = *batch[j];
    if (tr.terminal) {
      y[j] = tr.reward;
      continue;
    }
    double a = actor_target_.forward(tr.next_state)[0];
    a += clip(gaussian(settings_.target_sigma, rng), -settings_.noise_clip,
              settings_.noise_clip);
    a = clip(a, 0.0, 1.0);
    const auto in = critic_input(tr.next_state, a);
    const double q1 = critic1_target_.forward(in)[0];
    const double q = twin ? std::min(q1, critic2_target_.forward(in)[0]) : q1;
    y[j] = tr.reward + settings_.gamma * q;
  }
  return y;
}

UpdateDiagnostics Td3Agent::update(ReplayBuffer<MdTransition>& buffer, Rng& rng) {
  UpdateDiagnostics diag;
  if (buffer.size() < static_cast<std::size_t>(settings_.batch_size)) return diag;
  diag.updated = true;

  const auto batch = buffer.sample(settings_.batch_size, rng);
  const std::vector<double> y = targets(batch, rng);
  const double inv_b = 1.0 / static_cast<double>(batch.size());

  std::vector<std::vector<double>> critic_in(batch.size());
  for (std::size_t j = 0; j < batch.size(); ++j)
    critic_in[j] = critic_input(batch[j]->state, batch[j]->action);

  auto critic_step = [&](DenseNet& critic, AdamOptimizer& opt) {
    DenseNet::ForwardCache cache;
    critic.forward_batch(critic_in, cache);
    std::vector<std::vector<double>> dout(batch.size(), std::vector<double>(1));
    double loss = 0.0;
    for (std::size_t j = 0; j < batch.size(); ++j) {
      const double err = cache.outputs[j][0] - y[j];
      loss += err * err;
      dout[j][0] = 2.0 * err * inv_b;
    }
    backward_and_step(critic, opt, cache, dout);
    return loss * inv_b;
  };
  diag.critic1_loss = critic_step(critic1_, critic1_opt_);
  if (settings_.mode == Td3Settings::Mode::kTd3)
    diag.critic2_loss = critic_step(critic2_, critic2_opt_);

  ++updates_;
  if (updates_ % settings_.policy_delay != 0) return diag;
  diag.actor_updated = true;

  // Deterministic policy gradient through critic1 at a = pi(s).
  std::vector<std::vector<double>> states(batch.size());
  for (std::size_t j = 0; j < batch.size(); ++j) states[j] = batch[j]->state;
  DenseNet::ForwardCache actor_cache;
  actor_.forward_batch(states, actor_cache);

  std::vector<std::vector<double>> q_in(batch.size());
  for (std::size_t j = 0; j < batch.size(); ++j)
    q_in[j] = critic_input(states[j], actor_cache.outputs[j][0]);
  DenseNet::ForwardCache q_cache;
  critic1_.forward_batch(q_in, q_cache);

  double mean_q = 0.0;
  for (std::size_t j = 0; j < batch.size(); ++j) mean_q += q_cache.outputs[j][0];
  diag.actor_objective = mean_q * inv_b;

  // Minimize -mean(Q): gradients w.r.t. the critic inputs, action slot only.
  std::vector<std::vector<double>> dq(batch.size(), std::vector<double>{-inv_b});
  DenseNet::Gradients q_grads;
  critic1_.backward(q_cache, dq, true, q_grads);

  std::vector<std::vector<double>> da(batch.size(), std::vector<double>(1));
  for (std::size_t j = 0; j < batch.size(); ++j) da[j][0] = q_grads.inputs[j].back();
  backward_and_step(actor_, actor_opt_, actor_cache, da);

  soft_update(actor_target_, actor_, settings_.tau);
  soft_update(critic1_target_, critic1_, settings_.tau);
  if (settings_.mode == Td3Settings::Mode::kTd3)
    soft_update(critic2_target_, critic2_, settings_.tau);
  return diag;
}

void Td3Agent::save(const std::filesystem::path& dir) const {
  save_checkpoint(dir / "td3", {{"actor", &actor_},
                                {"actor_target", &actor_target_},
                                {"critic1", &critic1_},
                                {"critic1_target", &critic1_target_},
                                {"critic2", &critic2_},
                                {"critic2_target", &critic2_target_}});
}

void Td3Agent::load(const std::filesystem::path& dir) {
  load_checkpoint(dir / "td3", {{"actor", &actor_},
                                {"actor_target", &actor_target_},
                                {"critic1", &critic1_},
                                {"critic1_target", &critic1_target_},
                                {"critic2", &critic2_},
                                {"critic2_target", &critic2_target_}});
}

DdqnAgent::DdqnAgent(int state_dim, int action_count, const DdqnSettings& settings,
                     Rng& init_rng)
    : settings_(settings), actions_(action_count), epsilon_(settings.epsilon_start) {
  NetConfig cfg{state_dim, settings.hidden,
                settings.dueling ? Head::kDueling : Head::kLinear, action_count};
  eval_ = DenseNet(cfg, init_rng);
  target_ = eval_;
  opt_ = AdamOptimizer(eval_.param_count(), AdamConfig{settings.learning_rate, 0.9, 0.999, 1e-8});
}

int DdqnAgent::select_action(std::span<const double> state, bool explore, Rng& rng) {
  if (!explore) return argmax(eval_.forward(state));
  int action;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  if (u01(rng) < epsilon_) {
    std::uniform_int_distribution<int> pick(0, actions_ - 1);
    action = pick(rng);
  } else {
    action = argmax(eval_.forward(state));
  }
  epsilon_ = std::max(settings_.epsilon_floor, epsilon_ * settings_.epsilon_decay);
  return action;
}

std::vector<double> DdqnAgent::targets(const std::vector<const EiTransition*>& batch) const {
  std::vector<double> y(batch.size());
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const auto& tr = *batch[j];
    if (tr.terminal) {
      y[j] = tr.reward;
      continue;
    }
    const std::vector<double> q_target = target_.forward(tr.next_state);
    double bootstrap;
    if (settings_.double_q) {
      bootstrap = q_target[argmax(eval_.forward(tr.next_state))];
    } else {
      bootstrap = *std::max_element(q_target.begin(), q_target.end());
    }
    y[j] = tr.reward + settings_.gamma * bootstrap;
  }
  return y;
}

UpdateDiagnostics DdqnAgent::update(ReplayBuffer<EiTransition>& buffer, Rng& rng) {
  UpdateDiagnostics diag;
  if (buffer.size() < static_cast<std::size_t>(settings_.batch_size)) return diag;
  diag.updated = true;

  const auto batch = buffer.sample(settings_.batch_size, rng);
  const std::vector<double> y = targets(batch);
  const double inv_b = 1.0 / static_cast<double>(batch.size());

  std::vector<std::vector<double>> states(batch.size());
  for (std::size_t j = 0; j < batch.size(); ++j) states[j] = batch[j]->state;
  DenseNet::ForwardCache cache;
  eval_.forward_batch(states, cache);

  // MSE on the chosen action's Q; other outputs carry no gradient.
  std::vector<std::vector<double>> dout(batch.size(), std::vector<double>(actions_, 0.0));
  double loss = 0.0;
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const double err = cache.outputs[j][batch[j]->action] - y[j];
    loss += err * err;
    dout[j][batch[j]->action] = 2.0 * err * inv_b;
  }
  diag.loss = loss * inv_b;
  backward_and_step(eval_, opt_, cache, dout);

  ++updates_;
  if (settings_.target_sync_period > 0 && updates_ % settings_.target_sync_period == 0) {
    hard_copy(target_, eval_);
    diag.target_synced = true;
  }
  return diag;
}

void DdqnAgent::save(const std::filesystem::path& dir) const {
  save_checkpoint(dir / "ddqn", {{"evaluate", &eval_}, {"target", &target_}});
}

void DdqnAgent::load(const std::filesystem::path& dir) {
  load_checkpoint(dir / "ddqn", {{"evaluate", &eval_}, {"target", &target_}});
}

}  // namespace mecsim
