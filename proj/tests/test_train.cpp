#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "swarmplan/rng.hpp"
#include "swarmplan/train.hpp"

using namespace swarmplan;

namespace {

struct Data {
  Eigen::MatrixXd x, y;
};

// y = M x + small noise, one sample per column.
Data linear_data(int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(4, 3);
  m << 1, -2, 0.5, 0.3, 0.7, -1, 2, 0, 1, -0.5, 1.5, 0.2;
  Data d{Eigen::MatrixXd(3, n), Eigen::MatrixXd(4, n)};
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < 3; ++i) d.x(i, k) = rng.uniform(-1, 1);
    d.y.col(k) = m * d.x.col(k);
    for (int i = 0; i < 4; ++i) d.y(i, k) += 0.01 * rng.normal();
  }
  return d;
}

TrainConfig quick_config() {
  TrainConfig c;
  c.learning_rate = 0.01;
  c.batch_size = 8;
  c.max_epochs = 30;
  c.patience = 5;
  c.seed = 17;
  c.knots = 1;
  return c;
}

bool same_params(const Mlp& a, const Mlp& b) {
  for (std::size_t l = 0; l < a.weights.size(); ++l) {
    if (a.weights[l] != b.weights[l] || a.biases[l] != b.biases[l]) return false;
  }
  return a.input_norm.mean == b.input_norm.mean && a.output_norm.scale == b.output_norm.scale;
}

}  // namespace

TEST_CASE("layer stacks") {
  CHECK(layer_stack(15, 4, 100, 40) == std::vector<int>{15, 100, 100, 100, 100, 40});
  CHECK(layer_stack(3, 0, 10, 2) == std::vector<int>{3, 2});
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(TrainConfig{}.validate());
  TrainConfig c;
  c.learning_rate = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = TrainConfig{};
  c.batch_size = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = TrainConfig{};
  c.patience = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = TrainConfig{};
  c.max_epochs = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("defaults") {
  const TrainConfig c;
  CHECK(c.learning_rate == 0.001);
  CHECK(c.batch_size == 32);
  CHECK(c.knots == 10);
}

TEST_CASE("an already fitted net stops after the patience window") {
  Rng rng(3);
  Eigen::MatrixXd x(3, 20);
  for (Eigen::Index k = 0; k < x.size(); ++k) x.data()[k] = rng.normal();
  const Eigen::MatrixXd y = Eigen::MatrixXd::Zero(2, 20);
  Mlp net = init_mlp({3, 5, 2}, 1);
  for (auto& w : net.weights) w.setZero();
  TrainConfig c = quick_config();
  c.patience = 1;
  const TrainOutcome out = train(net, x, y, x.leftCols(5), y.leftCols(5), c);
  CHECK(out.history.train_loss.front() < 1e-12);
  CHECK(out.history.val_loss.size() <= 2);
  CHECK(out.history.best_epoch == 0);
}

TEST_CASE("training is deterministic given the seed") {
  const Data tr = linear_data(200, 1);
  const Data va = linear_data(50, 2);
  const Mlp net = init_mlp({3, 16, 16, 4}, 5);
  const TrainConfig c = quick_config();
  const TrainOutcome a = train(net, tr.x, tr.y, va.x, va.y, c);
  const TrainOutcome b = train(net, tr.x, tr.y, va.x, va.y, c);
  CHECK(a.history.train_loss == b.history.train_loss);
  CHECK(a.history.val_loss == b.history.val_loss);
  CHECK(a.history.best_epoch == b.history.best_epoch);
  CHECK(same_params(a.net, b.net));

  TrainConfig threaded = c;
  threaded.threads = 3;
  const TrainOutcome t = train(net, tr.x, tr.y, va.x, va.y, threaded);
  CHECK(t.history.val_loss == a.history.val_loss);
  CHECK(same_params(t.net, a.net));

  TrainConfig other = c;
  other.seed = 18;
  CHECK(train(net, tr.x, tr.y, va.x, va.y, other).history.train_loss != a.history.train_loss);
}

TEST_CASE("returned parameters achieve the best recorded validation loss") {
  const Data tr = linear_data(120, 3);
  const Data va = linear_data(40, 4);
  TrainConfig c = quick_config();
  c.max_epochs = 60;
  c.patience = 3;
  c.learning_rate = 0.2;  // large enough that validation loss oscillates
  const TrainOutcome out = train(init_mlp({3, 12, 4}, 9, 0.0), tr.x, tr.y, va.x, va.y, c);
  const auto& h = out.history;
  CHECK(h.best_val_loss() == *std::min_element(h.val_loss.begin(), h.val_loss.end()));
  CHECK(evaluate_loss(out.net, va.x, va.y, c.knots) == doctest::Approx(h.best_val_loss()).epsilon(1e-12));
  CHECK(h.train_loss.size() == h.val_loss.size());
  CHECK(h.epoch_seconds.size() == h.val_loss.size());
  CHECK(static_cast<int>(h.val_loss.size()) <= c.max_epochs);
  if (static_cast<int>(h.val_loss.size()) < c.max_epochs) {
    CHECK(static_cast<int>(h.val_loss.size()) == h.best_epoch + c.patience + 1);
  }
}

TEST_CASE("training learns a linear map") {
  const Data tr = linear_data(400, 5);
  const Data va = linear_data(100, 6);
  TrainConfig c = quick_config();
  c.max_epochs = 100;
  const Mlp net = init_mlp({3, 32, 4}, 2, 0.0);
  const double before = evaluate_loss(net, va.x, va.y, c.knots);
  const TrainOutcome out = train(net, tr.x, tr.y, va.x, va.y, c);
  CHECK(out.history.best_val_loss() < 0.05 * before);
  CHECK(out.history.best_val_loss() < 0.01);
}

TEST_CASE("standardizers are fit on the training split") {
  const Data tr = linear_data(100, 7);
  const Data va = linear_data(30, 8);
  const TrainOutcome out = train(init_mlp({3, 8, 4}, 1), tr.x, tr.y, va.x, va.y, quick_config());
  CHECK(out.net.input_norm.mean.isApprox(tr.x.rowwise().mean()));
  CHECK(out.net.output_norm.mean.isApprox(tr.y.rowwise().mean()));
}

TEST_CASE("dimension mismatches are rejected") {
  const Data tr = linear_data(20, 1);
  const Mlp net = init_mlp({3, 4, 4}, 1);
  CHECK_THROWS_AS(train(init_mlp({2, 4, 4}, 1), tr.x, tr.y, tr.x, tr.y, quick_config()), std::invalid_argument);
  CHECK_THROWS_AS(train(net, tr.x, tr.y.topRows(3), tr.x, tr.y, quick_config()), std::invalid_argument);
  CHECK_THROWS_AS(train(net, tr.x, tr.y, tr.x.leftCols(0), tr.y.leftCols(0), quick_config()), std::invalid_argument);
}

TEST_CASE("divergence stops training") {
  const Data tr = linear_data(60, 13);
  TrainConfig c = quick_config();
  c.learning_rate = 50.0;
  c.patience = 50;
  c.max_epochs = 50;
  const TrainOutcome out = train(init_mlp({3, 64, 64, 4}, 1, 0.0), tr.x, tr.y, tr.x, tr.y, c);
  CHECK(out.history.val_loss.size() < 50);
  CHECK_FALSE(std::isfinite(out.history.val_loss.back()));
}

TEST_CASE("sweep grid") {
  const Data tr = linear_data(80, 11);
  const Data va = linear_data(20, 12);
  TrainConfig c = quick_config();
  c.max_epochs = 4;

  const SweepResult one = sweep({2}, {6}, tr.x, tr.y, va.x, va.y, c);
  REQUIRE(one.val_loss.rows() == 1);
  REQUIRE(one.val_loss.cols() == 1);
  const TrainOutcome single = train(init_mlp(layer_stack(3, 2, 6, 4), c.seed, 0.5), tr.x, tr.y, va.x, va.y, c);
  CHECK(one.val_loss(0, 0) == single.history.best_val_loss());

  c.learning_rate = 0.001;
  const SweepResult grid = sweep({3, 4, 6}, {10, 100, 200}, tr.x, tr.y, va.x, va.y, c);
  CHECK(grid.hidden_layers == std::vector<int>{3, 4, 6});
  CHECK(grid.units == std::vector<int>{10, 100, 200});
  CHECK(grid.val_loss.rows() == 3);
  CHECK(grid.val_loss.cols() == 3);
  CHECK(grid.val_loss.allFinite());
  CHECK(grid.val_loss(1, 1) == sweep({4}, {100}, tr.x, tr.y, va.x, va.y, c).val_loss(0, 0));
  CHECK_THROWS_AS(sweep({}, {10}, tr.x, tr.y, va.x, va.y, c), std::invalid_argument);
}
