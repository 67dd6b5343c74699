#include "swarmplan/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "swarmplan/rng.hpp"

namespace swarmplan {

Standardizer Standardizer::identity(Eigen::Index n) {
  return Standardizer{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n)};
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& data) {
  if (data.cols() == 0) throw std::invalid_argument("Standardizer::fit: no samples");
  Standardizer s;
  s.mean = data.rowwise().mean();
  const Eigen::MatrixXd centered = data.colwise() - s.mean;
  s.scale = (centered.rowwise().squaredNorm() / static_cast<double>(data.cols())).cwiseSqrt();
  for (Eigen::Index i = 0; i < s.scale.size(); ++i) {
    if (!(s.scale[i] >= 1e-12)) {
      s.mean[i] = 0.0;
      s.scale[i] = 1.0;
    }
  }
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& x) const {
  return (x.colwise() - mean).array().colwise() / scale.array();
}

Eigen::MatrixXd Standardizer::invert(const Eigen::MatrixXd& y) const {
  return (y.array().colwise() * scale.array()).matrix().colwise() + mean;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    n += static_cast<std::size_t>(weights[l].size() + biases[l].size());
  }
  return n;
}

void Mlp::validate() const {
  if (layer_sizes.size() < 2) throw std::invalid_argument("Mlp: need at least input and output sizes");
  if (weights.size() != layer_sizes.size() - 1 || biases.size() != weights.size()) {
    throw std::invalid_argument("Mlp: layer count mismatch");
  }
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (weights[l].rows() != layer_sizes[l + 1] || weights[l].cols() != layer_sizes[l] ||
        biases[l].size() != layer_sizes[l + 1]) {
      throw std::invalid_argument("Mlp: incompatible layer dimensions at layer " + std::to_string(l));
    }
    if (!weights[l].allFinite() || !biases[l].allFinite()) throw std::invalid_argument("Mlp: non-finite parameters");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) throw std::invalid_argument("Mlp: dropout rate must be in [0,1)");
  if (input_norm.mean.size() != input_size() || output_norm.mean.size() != output_size()) {
    throw std::invalid_argument("Mlp: standardizer size mismatch");
  }
}

Mlp init_mlp(const std::vector<int>& layer_sizes, std::uint64_t seed, double dropout_rate) {
  if (layer_sizes.size() < 2) throw std::invalid_argument("init_mlp: need at least two layer sizes");
  for (int s : layer_sizes) {
    if (s <= 0) throw std::invalid_argument("init_mlp: layer sizes must be positive");
  }
  Mlp net;
  net.layer_sizes = layer_sizes;
  net.dropout_rate = dropout_rate;
  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const int fan_in = layer_sizes[l];
    const double sd = std::sqrt(2.0 / fan_in);
    Eigen::MatrixXd w(layer_sizes[l + 1], fan_in);
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = sd * rng.normal();
    }
    net.weights.push_back(std::move(w));
    net.biases.push_back(Eigen::VectorXd::Zero(layer_sizes[l + 1]));
  }
  net.input_norm = Standardizer::identity(layer_sizes.front());
  net.output_norm = Standardizer::identity(layer_sizes.back());
  net.validate();
  return net;
}

Eigen::VectorXd dropout_mask(std::uint64_t mask_seed, int layer, int width, double rate) {
  Eigen::VectorXd m(width);
  Rng rng(mix_seed(mask_seed, static_cast<std::uint64_t>(layer) + 1));
  const double keep_scale = 1.0 / (1.0 - rate);
  for (int j = 0; j < width; ++j) m[j] = rng.uniform() < rate ? 0.0 : keep_scale;
  return m;
}

Eigen::VectorXd forward(const Mlp& net, const Eigen::VectorXd& x, ForwardMode mode, ForwardCache* cache) {
  if (x.size() != net.input_size()) throw std::invalid_argument("forward: input dimension mismatch");
  const int L = net.num_layers();
  const bool drop = mode.train && net.dropout_rate > 0.0;
  if (cache) {
    cache->pre.assign(static_cast<std::size_t>(L), {});
    cache->post.assign(static_cast<std::size_t>(L + 1), {});
    cache->mask.assign(static_cast<std::size_t>(L > 0 ? L - 1 : 0), {});
    cache->post[0] = x;
  }
  Eigen::VectorXd a = x;
  for (int l = 0; l < L; ++l) {
    Eigen::VectorXd h = net.weights[static_cast<std::size_t>(l)] * a + net.biases[static_cast<std::size_t>(l)];
    if (cache) cache->pre[static_cast<std::size_t>(l)] = h;
    if (l + 1 < L) {
      a = h.cwiseMax(0.0);
      if (drop) {
        Eigen::VectorXd m = dropout_mask(mode.mask_seed, l, static_cast<int>(a.size()), net.dropout_rate);
        a.array() *= m.array();
        if (cache) cache->mask[static_cast<std::size_t>(l)] = std::move(m);
      } else if (cache) {
        cache->mask[static_cast<std::size_t>(l)] = Eigen::VectorXd::Ones(a.size());
      }
    } else {
      a = std::move(h);
    }
    if (cache) cache->post[static_cast<std::size_t>(l + 1)] = a;
  }
  return a;
}

double loss(const Eigen::VectorXd& pred, const Eigen::VectorXd& target, int knots) {
  if (pred.size() != target.size()) throw std::invalid_argument("loss: length mismatch");
  if (knots < 1) throw std::invalid_argument("loss: knot count must be positive");
  return (pred - target).squaredNorm() / (2.0 * knots);
}

Gradients Gradients::zeros_like(const Mlp& net) {
  Gradients g;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    g.dw.push_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    g.db.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
  }
  return g;
}

Gradients& Gradients::operator+=(const Gradients& o) {
  for (std::size_t l = 0; l < dw.size(); ++l) {
    dw[l] += o.dw[l];
    db[l] += o.db[l];
  }
  return *this;
}

Gradients& Gradients::operator*=(double s) {
  for (std::size_t l = 0; l < dw.size(); ++l) {
    dw[l] *= s;
    db[l] *= s;
  }
  return *this;
}

Gradients backward(const Mlp& net, const Eigen::VectorXd& x, const Eigen::VectorXd& target, std::uint64_t mask_seed,
                   int knots, double* loss_out) {
  if (target.size() != net.output_size()) throw std::invalid_argument("backward: target dimension mismatch");
  ForwardCache cache;
  const Eigen::VectorXd pred = forward(net, x, ForwardMode::training(mask_seed), &cache);
  if (loss_out) *loss_out = loss(pred, target, knots);

  const int L = net.num_layers();
  Gradients g;
  g.dw.resize(static_cast<std::size_t>(L));
  g.db.resize(static_cast<std::size_t>(L));
  Eigen::VectorXd delta = (pred - target) / static_cast<double>(knots);
  for (int l = L - 1; l >= 0; --l) {
    const auto ul = static_cast<std::size_t>(l);
    g.dw[ul] = delta * cache.post[ul].transpose();
    g.db[ul] = delta;
    if (l > 0) {
      Eigen::VectorXd back = net.weights[ul].transpose() * delta;
      // Through dropout then ReLU; g'(0) = 0.
      const auto& h = cache.pre[ul - 1];
      const auto& m = cache.mask[ul - 1];
      for (Eigen::Index j = 0; j < back.size(); ++j) back[j] = h[j] > 0.0 ? back[j] * m[j] : 0.0;
      delta = std::move(back);
    }
  }
  return g;
}

void sgd_step(Mlp& net, const Gradients& g, double learning_rate) {
  if (g.dw.size() != net.weights.size()) throw std::invalid_argument("sgd_step: gradient shape mismatch");
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    net.weights[l] -= learning_rate * g.dw[l];
    net.biases[l] -= learning_rate * g.db[l];
  }
}

Eigen::VectorXd predict_vector(const Mlp& net, const Eigen::VectorXd& input) {
  const Eigen::VectorXd z = net.input_norm.apply(input);
  const Eigen::VectorXd y = forward(net, z, ForwardMode::eval());
  return net.output_norm.invert(y);
}

std::vector<Eigen::MatrixXd> predict(const Mlp& net, const Scenario& sc, const FamilyOptions& opts) {
  const Family f = family_of(sc);
  if (net.input_size() != input_size(f) || net.output_size() != target_size(f, opts)) {
    throw std::invalid_argument("predict: network shape does not match family " + std::string(to_string(f)));
  }
  if (!net.family.empty() && net.family != to_string(f)) {
    throw std::invalid_argument("predict: model trained on " + net.family + ", scenario is " + std::string(to_string(f)));
  }
  return decode_target(predict_vector(net, encode_input(sc)), f, opts);
}

}  // namespace swarmplan
