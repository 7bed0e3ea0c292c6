#include "mecsim/neural.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mecsim {

std::vector<double> dueling_combine(double value, std::span<const double> advantages) {
  if (advantages.empty()) throw std::invalid_argument("dueling_combine: empty advantages");
  const double mean =
      std::accumulate(advantages.begin(), advantages.end(), 0.0) / advantages.size();
  std::vector<double> q(advantages.size());
  for (std::size_t i = 0; i < advantages.size(); ++i) q[i] = value + advantages[i] - mean;
  return q;
}

DenseNet::DenseNet(const NetConfig& config, Rng& rng) : config_(config) {
  if (config.input_dim <= 0) throw std::invalid_argument("DenseNet: input_dim must be > 0");
  if (config.output_dim <= 0) throw std::invalid_argument("DenseNet: output_dim must be > 0");
  widths_.push_back(config.input_dim);
  for (int h : config.hidden) widths_.push_back(h);

  std::size_t total = 0;
  const int layers = layer_count();
  w_off_.resize(layers);
  b_off_.resize(layers);
  for (int l = 0; l < layers; ++l) {
    w_off_[l] = total;
    total += static_cast<std::size_t>(widths_[l + 1]) * widths_[l];
    b_off_[l] = total;
    total += widths_[l + 1];
  }
  const int head_in = widths_.back();
  if (config.head == Head::kDueling) {
    val_w_ = total;
    total += head_in;
    val_b_ = total;
    total += 1;
    adv_w_ = total;
    total += static_cast<std::size_t>(config.output_dim) * head_in;
    adv_b_ = total;
    total += config.output_dim;
  } else {
    head_w_ = total;
    total += static_cast<std::size_t>(config.output_dim) * head_in;
    head_b_ = total;
    total += config.output_dim;
  }
  params_.resize(total);

  // Uniform [-1/sqrt(fan_in), +1/sqrt(fan_in)] per layer, biases included.
  auto init_block = [&](std::size_t w_at, std::size_t w_len, std::size_t b_at,
                        std::size_t b_len, int fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (std::size_t i = 0; i < w_len; ++i) params_[w_at + i] = u(rng);
    for (std::size_t i = 0; i < b_len; ++i) params_[b_at + i] = u(rng);
  };
  for (int l = 0; l < layers; ++l) {
    init_block(w_off_[l], static_cast<std::size_t>(widths_[l + 1]) * widths_[l], b_off_[l],
               widths_[l + 1], widths_[l]);
  }
  if (config.head == Head::kDueling) {
    init_block(val_w_, head_in, val_b_, 1, head_in);
    init_block(adv_w_, static_cast<std::size_t>(config.output_dim) * head_in, adv_b_,
               config.output_dim, head_in);
  } else {
    init_block(head_w_, static_cast<std::size_t>(config.output_dim) * head_in, head_b_,
               config.output_dim, head_in);
  }
}

std::vector<double> DenseNet::forward(std::span<const double> input) const {
  if (static_cast<int>(input.size()) != config_.input_dim)
    throw std::invalid_argument("DenseNet: input dimension mismatch");

  std::vector<double> act(input.begin(), input.end());
  std::vector<double> next;
  for (int l = 0; l < layer_count(); ++l) {
    const int rows = widths_[l + 1], cols = widths_[l];
    next.assign(rows, 0.0);
    const double* w = params_.data() + w_off_[l];
    const double* b = params_.data() + b_off_[l];
    for (int r = 0; r < rows; ++r) {
      double z = b[r];
      const double* wr = w + static_cast<std::size_t>(r) * cols;
      for (int c = 0; c < cols; ++c) z += wr[c] * act[c];
      next[r] = z > 0 ? z : 0.0;
    }
    act.swap(next);
  }

  const int head_in = widths_.back();
  const int out = config_.output_dim;
  if (config_.head == Head::kDueling) {
    const double* wv = params_.data() + val_w_;
    double v = params_[val_b_];
    for (int c = 0; c < head_in; ++c) v += wv[c] * act[c];
    std::vector<double> adv(out);
    const double* wa = params_.data() + adv_w_;
    const double* ba = params_.data() + adv_b_;
    for (int r = 0; r < out; ++r) {
      double z = ba[r];
      const double* wr = wa + static_cast<std::size_t>(r) * head_in;
      for (int c = 0; c < head_in; ++c) z += wr[c] * act[c];
      adv[r] = z;
    }
    return dueling_combine(v, adv);
  }

  std::vector<double> y(out);
  const double* w = params_.data() + head_w_;
  const double* b = params_.data() + head_b_;
  for (int r = 0; r < out; ++r) {
    double z = b[r];
    const double* wr = w + static_cast<std::size_t>(r) * head_in;
    for (int c = 0; c < head_in; ++c) z += wr[c] * act[c];
    y[r] = config_.head == Head::kSigmoid ? 1.0 / (1.0 + std::exp(-z)) : z;
  }
  return y;
}

void DenseNet::forward_batch(const std::vector<std::vector<double>>& inputs,
                             ForwardCache& cache) const {
  const std::size_t batch = inputs.size();
  const int layers = layer_count();
  cache.inputs = inputs;
  cache.pre.assign(layers + 1, {});
  cache.post.assign(layers, {});
  cache.outputs.assign(batch, {});
  cache.batch = batch;
  cache.valid = batch > 0;

  for (int l = 0; l < layers; ++l) {
    cache.pre[l].assign(batch * widths_[l + 1], 0.0);
    cache.post[l].assign(batch * widths_[l + 1], 0.0);
  }
  const int head_in = widths_.back();
  const int out = config_.output_dim;
  const int head_pre_width = config_.head == Head::kDueling ? 1 + out : out;
  cache.pre[layers].assign(batch * head_pre_width, 0.0);

  for (std::size_t s = 0; s < batch; ++s) {
    if (static_cast<int>(inputs[s].size()) != config_.input_dim)
      throw std::invalid_argument("DenseNet: input dimension mismatch");
    const double* act = inputs[s].data();
    for (int l = 0; l < layers; ++l) {
      const int rows = widths_[l + 1], cols = widths_[l];
      double* pre = cache.pre[l].data() + s * rows;
      double* post = cache.post[l].data() + s * rows;
      const double* w = params_.data() + w_off_[l];
      const double* b = params_.data() + b_off_[l];
      for (int r = 0; r < rows; ++r) {
        double z = b[r];
        const double* wr = w + static_cast<std::size_t>(r) * cols;
        for (int c = 0; c < cols; ++c) z += wr[c] * act[c];
        pre[r] = z;
        post[r] = z > 0 ? z : 0.0;
      }
      act = post;
    }

    double* hp = cache.pre[layers].data() + s * head_pre_width;
    if (config_.head == Head::kDueling) {
      const double* wv = params_.data() + val_w_;
      double v = params_[val_b_];
      for (int c = 0; c < head_in; ++c) v += wv[c] * act[c];
      hp[0] = v;
      const double* wa = params_.data() + adv_w_;
      const double* ba = params_.data() + adv_b_;
      for (int r = 0; r < out; ++r) {
        double z = ba[r];
        const double* wr = wa + static_cast<std::size_t>(r) * head_in;
        for (int c = 0; c < head_in; ++c) z += wr[c] * act[c];
        hp[1 + r] = z;
      }
      cache.outputs[s] =
          dueling_combine(v, std::span<const double>(hp + 1, static_cast<std::size_t>(out)));
    } else {
      const double* w = params_.data() + head_w_;
      const double* b = params_.data() + head_b_;
      cache.outputs[s].resize(out);
      for (int r = 0; r < out; ++r) {
        double z = b[r];
        const double* wr = w + static_cast<std::size_t>(r) * head_in;
        for (int c = 0; c < head_in; ++c) z += wr[c] * act[c];
        hp[r] = z;
        cache.outputs[s][r] = config_.head == Head::kSigmoid ? 1.0 / (1.0 + std::exp(-z)) : z;
      }
    }
  }
}

void DenseNet::backward(const ForwardCache& cache,
                        const std::vector<std::vector<double>>& output_grads,
                        bool want_input_grads, Gradients& grads) const {
  if (!cache.valid) throw std::logic_error("DenseNet: backward without cached forward");
  if (output_grads.size() != cache.batch)
    throw std::invalid_argument("DenseNet: output gradient batch mismatch");

  const int layers = layer_count();
  const int head_in = widths_.back();
  const int out = config_.output_dim;

  grads.params.assign(params_.size(), 0.0);
  if (want_input_grads) grads.inputs.assign(cache.batch, std::vector<double>(config_.input_dim, 0.0));

  std::vector<double> dz_head, dh(head_in), dz, dh_prev;
  for (std::size_t s = 0; s < cache.batch; ++s) {
    const double* h_last =
        layers > 0 ? cache.post[layers - 1].data() + s * head_in : cache.inputs[s].data();

    // Head backward into dh.
    std::fill(dh.begin(), dh.end(), 0.0);
    if (config_.head == Head::kDueling) {
      const auto& dq = output_grads[s];
      double dv = 0.0;
      for (int i = 0; i < out; ++i) dv += dq[i];
      const double mean_dq = dv / out;
      grads.params[val_b_] += dv;
      for (int c = 0; c < head_in; ++c) grads.params[val_w_ + c] += dv * h_last[c];
      const double* wv = params_.data() + val_w_;
      for (int c = 0; c < head_in; ++c) dh[c] += wv[c] * dv;
      const double* wa = params_.data() + adv_w_;
      for (int r = 0; r < out; ++r) {
        const double da = dq[r] - mean_dq;
        grads.params[adv_b_ + r] += da;
        double* gw = grads.params.data() + adv_w_ + static_cast<std::size_t>(r) * head_in;
        const double* wr = wa + static_cast<std::size_t>(r) * head_in;
        for (int c = 0; c < head_in; ++c) {
          gw[c] += da * h_last[c];
          dh[c] += wr[c] * da;
        }
      }
    } else {
      dz_head.assign(output_grads[s].begin(), output_grads[s].end());
      if (config_.head == Head::kSigmoid) {
        for (int r = 0; r < out; ++r) {
          const double y = cache.outputs[s][r];
          dz_head[r] *= y * (1.0 - y);
        }
      }
      const double* w = params_.data() + head_w_;
      for (int r = 0; r < out; ++r) {
        grads.params[head_b_ + r] += dz_head[r];
        double* gw = grads.params.data() + head_w_ + static_cast<std::size_t>(r) * head_in;
        const double* wr = w + static_cast<std::size_t>(r) * head_in;
        for (int c = 0; c < head_in; ++c) {
          gw[c] += dz_head[r] * h_last[c];
          dh[c] += wr[c] * dz_head[r];
        }
      }
    }

    // Hidden layers, last to first.
    for (int l = layers - 1; l >= 0; --l) {
      const int rows = widths_[l + 1], cols = widths_[l];
      const double* pre = cache.pre[l].data() + s * rows;
      const double* below =
          l > 0 ? cache.post[l - 1].data() + s * cols : cache.inputs[s].data();
      dz.assign(rows, 0.0);
      for (int r = 0; r < rows; ++r) dz[r] = pre[r] > 0 ? dh[r] : 0.0;

      const double* w = params_.data() + w_off_[l];
      const bool need_below = l > 0 || want_input_grads;
      if (need_below) dh_prev.assign(cols, 0.0);
      for (int r = 0; r < rows; ++r) {
        grads.params[b_off_[l] + r] += dz[r];
        if (dz[r] == 0.0) {
          continue;
        }
        double* gw = grads.params.data() + w_off_[l] + static_cast<std::size_t>(r) * cols;
        const double* wr = w + static_cast<std::size_t>(r) * cols;
        for (int c = 0; c < cols; ++c) gw[c] += dz[r] * below[c];
        if (need_below)
          for (int c = 0; c < cols; ++c) dh_prev[c] += wr[c] * dz[r];
      }
      if (l > 0) {
        dh = dh_prev;
      } else if (want_input_grads) {
        grads.inputs[s] = dh_prev;
      }
    }
    if (layers == 0 && want_input_grads) grads.inputs[s] = dh;
  }
}

AdamOptimizer::AdamOptimizer(std::size_t param_count, AdamConfig config)
    : config_(config), m_(param_count, 0.0), v_(param_count, 0.0) {}

void AdamOptimizer::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size())
    throw std::invalid_argument("AdamOptimizer: size mismatch");
  ++step_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = b1 * m_[i] + (1.0 - b1) * grads[i];
    v_[i] = b2 * v_[i] + (1.0 - b2) * grads[i] * grads[i];
    const double mhat = m_[i] / corr1;
    const double vhat = v_[i] / corr2;
    params[i] -= config_.learning_rate * mhat / (std::sqrt(vhat) + config_.epsilon);
  }
}

void backward_and_step(DenseNet& net, AdamOptimizer& opt, const DenseNet::ForwardCache& cache,
                       const std::vector<std::vector<double>>& output_grads) {
  DenseNet::Gradients grads;
  net.backward(cache, output_grads, false, grads);
  opt.step(net.params(), grads.params);
}

namespace {

void check_same_shape(const DenseNet& a, const DenseNet& b, const char* what) {
  if (a.param_count() != b.param_count() || a.config().input_dim != b.config().input_dim ||
      a.config().hidden != b.config().hidden || a.config().head != b.config().head ||
      a.config().output_dim != b.config().output_dim)
    throw std::invalid_argument(std::string(what) + ": architecture mismatch");
}

}  // namespace

void soft_update(DenseNet& target, const DenseNet& source, double tau) {
  check_same_shape(target, source, "soft_update");
  auto t = target.params();
  auto s = source.params();
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = tau * s[i] + (1.0 - tau) * t[i];
}

void hard_copy(DenseNet& target, const DenseNet& source) { soft_update(target, source, 1.0); }

namespace {

constexpr std::uint32_t kCheckpointVersion = 1;

void write_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t read_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t read_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void write_f64(std::ostream& os, double d) { write_u64(os, std::bit_cast<std::uint64_t>(d)); }

double read_f64(std::istream& is) { return std::bit_cast<double>(read_u64(is)); }

std::string head_name(Head h) {
  switch (h) {
    case Head::kLinear: return "linear";
    case Head::kSigmoid: return "sigmoid";
    case Head::kDueling: return "dueling";
  }
  return "?";
}

}  // namespace

void save_checkpoint(const std::filesystem::path& stem,
                     const std::vector<std::pair<std::string, const DenseNet*>>& nets) {
  std::filesystem::create_directories(stem.parent_path().empty() ? "." : stem.parent_path());
  std::ofstream manifest(stem.string() + ".manifest");
  if (!manifest) throw std::runtime_error("cannot write checkpoint manifest");
  manifest << "mecsim-checkpoint v" << kCheckpointVersion << "\n";
  for (const auto& [name, net] : nets) {
    const auto& c = net->config();
    manifest << name << " input=" << c.input_dim << " hidden=";
    for (std::size_t i = 0; i < c.hidden.size(); ++i)
      manifest << (i ? "," : "") << c.hidden[i];
    manifest << " head=" << head_name(c.head) << " output=" << c.output_dim
             << " params=" << net->param_count() << "\n";
  }

  std::ofstream bin(stem.string() + ".params", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot write checkpoint params");
  bin.write("MECP", 4);
  write_u32(bin, kCheckpointVersion);
  write_u32(bin, static_cast<std::uint32_t>(nets.size()));
  for (const auto& [name, net] : nets) {
    write_u32(bin, static_cast<std::uint32_t>(name.size()));
    bin.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_u64(bin, net->param_count());
    for (double d : net->params()) write_f64(bin, d);
  }
}

void load_checkpoint(const std::filesystem::path& stem,
                     const std::vector<std::pair<std::string, DenseNet*>>& nets) {
  std::ifstream bin(stem.string() + ".params", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open checkpoint: " + stem.string());
  char magic[4];
  bin.read(magic, 4);
  if (std::string(magic, 4) != "MECP") throw std::runtime_error("bad checkpoint magic");
  if (read_u32(bin) != kCheckpointVersion) throw std::runtime_error("unsupported checkpoint version");
  const std::uint32_t count = read_u32(bin);

  std::vector<std::pair<std::string, std::vector<double>>> arrays;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t name_len = read_u32(bin);
    std::string name(name_len, '\0');
    bin.read(name.data(), name_len);
    const std::uint64_t n = read_u64(bin);
    std::vector<double> values(n);
    for (auto& d : values) d = read_f64(bin);
    arrays.emplace_back(std::move(name), std::move(values));
  }
  if (!bin) throw std::runtime_error("truncated checkpoint: " + stem.string());

  for (const auto& [name, net] : nets) {
    auto it = std::find_if(arrays.begin(), arrays.end(),
                           [&](const auto& a) { return a.first == name; });
    if (it == arrays.end())
      throw std::runtime_error("checkpoint missing parameter array: " + name);
    if (it->second.size() != net->param_count())
      throw std::runtime_error("checkpoint shape mismatch for: " + name);
    std::copy(it->second.begin(), it->second.end(), net->params().begin());
  }
}

}  // namespace mecsim
