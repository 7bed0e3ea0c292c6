#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mecsim/random.hpp"

namespace mecsim {

enum class Head { kLinear, kSigmoid, kDueling };

struct NetConfig {
  int input_dim = 0;
  std::vector<int> hidden{64, 64, 64, 64};
  Head head = Head::kLinear;
  int output_dim = 1;  // action count for dueling heads
};

/// Identifiable dueling combination: Q_i = V + (A_i - mean(A)).
std::vector<double> dueling_combine(double value, std::span<const double> advantages);

/// Fully connected ReLU network with a linear, sigmoid or dueling output head.
/// Parameters live in one flat array (row-major weights, then biases, layer by
/// layer; dueling heads store the value stream before the advantage stream).
class DenseNet {
 public:
  DenseNet() = default;
  DenseNet(const NetConfig& config, Rng& rng);  // uniform [-1/sqrt(fan_in), +1/sqrt(fan_in)]

  const NetConfig& config() const { return config_; }
  std::size_t param_count() const { return params_.size(); }
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  /// Single-sample forward pass.
  std::vector<double> forward(std::span<const double> input) const;

  /// Cached activations for one batch; required by backward().
  struct ForwardCache {
    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> pre;   // pre-activations per layer, batch-flattened
    std::vector<std::vector<double>> post;  // post-activations per layer
    std::vector<std::vector<double>> outputs;
    std::size_t batch = 0;
    bool valid = false;
  };

  void forward_batch(const std::vector<std::vector<double>>& inputs, ForwardCache& cache) const;

  struct Gradients {
    std::vector<double> params;
    std::vector<std::vector<double>> inputs;  // filled only on request
  };

  /// Reverse pass for the cached batch. `output_grads` holds dLoss/dOutput per
  /// sample; parameter gradients accumulate the batch sum. Throws when the
  /// cache is stale or missing.
  void backward(const ForwardCache& cache, const std::vector<std::vector<double>>& output_grads,
                bool want_input_grads, Gradients& grads) const;

 private:
  int layer_count() const { return static_cast<int>(widths_.size()) - 1; }

  NetConfig config_;
  std::vector<int> widths_;          // input, hidden..., head-input
  std::vector<std::size_t> w_off_;   // per hidden layer: weight offset
  std::vector<std::size_t> b_off_;   // per hidden layer: bias offset
  std::size_t head_w_ = 0, head_b_ = 0;        // linear/sigmoid head
  std::size_t val_w_ = 0, val_b_ = 0;          // dueling value stream
  std::size_t adv_w_ = 0, adv_b_ = 0;          // dueling advantage stream
  std::vector<double> params_;
};

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class AdamOptimizer {
 public:
  AdamOptimizer() = default;
  AdamOptimizer(std::size_t param_count, AdamConfig config = {});

  void step(std::span<double> params, std::span<const double> grads);
  std::int64_t step_count() const { return step_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::vector<double> m_, v_;
  std::int64_t step_ = 0;
};

/// One reverse pass plus one Adam step on `net`'s parameters.
void backward_and_step(DenseNet& net, AdamOptimizer& opt, const DenseNet::ForwardCache& cache,
                       const std::vector<std::vector<double>>& output_grads);

/// theta' <- tau * theta + (1 - tau) * theta', elementwise.
void soft_update(DenseNet& target, const DenseNet& source, double tau);
void hard_copy(DenseNet& target, const DenseNet& source);

// Checkpoints: <stem>.params holds little-endian f64 arrays, <stem>.manifest
// is a text listing of names and layer shapes.
void save_checkpoint(const std::filesystem::path& stem,
                     const std::vector<std::pair<std::string, const DenseNet*>>& nets);
void load_checkpoint(const std::filesystem::path& stem,
                     const std::vector<std::pair<std::string, DenseNet*>>& nets);

}  // namespace mecsim
