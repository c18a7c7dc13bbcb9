#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bmctx/growth.hpp"
#include "bmctx/random.hpp"

using namespace bmctx;

namespace {

RbmLayer layer_with(Matrix w) {
  RbmLayer layer;
  layer.weights = std::move(w);
  return layer;
}

}  // namespace

TEST_CASE("visible confidences are the row maxima") {
  Matrix w(2, 2);
  w << 0.2, -0.1, 0.0, 0.3;
  const Eigen::VectorXd c = visible_confidences(layer_with(w));
  CHECK(c[0] == 0.2);
  CHECK(c[1] == 0.3);

  CHECK((visible_confidences(layer_with(Matrix::Zero(3, 2))).array() == 0.0).all());

  Matrix one_hidden(3, 1);
  one_hidden << -0.5, 0.25, 0.0;
  const Eigen::VectorXd single = visible_confidences(layer_with(one_hidden));
  CHECK(single == one_hidden.col(0));
}

TEST_CASE("model confidence is the softmax of the weakest visible unit") {
  Eigen::VectorXd uniform(2);
  uniform << 0.0, 0.0;
  ModelConfidence mc = model_confidence(uniform);
  CHECK(mc.z0 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(mc.c_m == doctest::Approx(0.5).epsilon(1e-12));

  Eigen::VectorXd one(1);
  one << 0.0;
  mc = model_confidence(one);
  CHECK(mc.z0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mc.c_m == doctest::Approx(1.0).epsilon(1e-12));

  Eigen::VectorXd pair(2);
  pair << std::log(3.0), std::log(1.0);
  mc = model_confidence(pair);
  CHECK(mc.z0 == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(mc.c_m == doctest::Approx(0.25).epsilon(1e-9));

  CHECK_THROWS_AS(model_confidence(Eigen::VectorXd()), std::invalid_argument);
}

TEST_CASE("model confidence lies in (0,1] and ignores uniform shifts") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(uniform_below(rng, 12));
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) c[i] = uniform_in(rng, -8.0, 8.0);
    const ModelConfidence mc = model_confidence(c);
    CHECK(mc.c_m > 0.0);
    CHECK(mc.c_m <= 1.0);
    // adding a constant scales every exponential alike, leaving the ratio
    const ModelConfidence shifted = model_confidence(c.array() + 1.7);
    CHECK(shifted.c_m == doctest::Approx(mc.c_m).epsilon(1e-9));
  }
}

TEST_CASE("the neuron-growth test compares against patience times baseline") {
  ConfidenceState state{0.6, 1.0, kDefaultNeuronPatience};
  CHECK_FALSE(needs_new_neuron(0.6, state));            // current equals baseline
  CHECK(needs_new_neuron(0.3, state));                  // 0.3 < 0.3639
  state.patience_neuron = 0.5;
  CHECK_FALSE(needs_new_neuron(0.36, state));           // 0.36 >= 0.30
}

TEST_CASE("the simplified test drops the partition from both sides") {
  // same exp(min c_v) numerator, partitions drifted apart
  ConfidenceState state{0.5, 2.0, 0.9};
  const ModelConfidence current{0.2, 5.0};  // numerator 1.0 vs baseline numerator 1.0
  CHECK(needs_new_neuron(current, state, false));        // 0.2 < 0.9 * 0.5
  CHECK_FALSE(needs_new_neuron(current, state, true));   // 1.0 >= 0.9 * 1.0
}

TEST_CASE("add_neuron appends the reciprocal-row-sum column") {
  Matrix w(2, 2);
  w << 0.1, 0.4, 1.5, 2.5;  // row sums 0.5 and 4.0
  RbmLayer layer = layer_with(w);
  add_neuron(layer);
  REQUIRE(layer.hidden_units() == 3);
  CHECK(layer.weights(0, 2) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(layer.weights(1, 2) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(layer.weights.leftCols(2) == w);  // existing columns untouched

  Matrix negative(1, 1);
  negative << -0.5;
  RbmLayer neg = layer_with(negative);
  add_neuron(neg);
  CHECK(neg.weights(0, 1) == doctest::Approx(-2.0).epsilon(1e-12));

  Matrix zero_sum(1, 2);
  zero_sum << 0.3, -0.3;
  RbmLayer degenerate = layer_with(zero_sum);
  add_neuron(degenerate);
  CHECK(degenerate.weights(0, 2) == kNewWeightCap);  // guard then cap
}

TEST_CASE("add_neuron grows by exactly one and preserves old columns") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    RbmLayer layer(1 + uniform_below(rng, 6), 1 + uniform_below(rng, 5), 0.1, rng());
    const Matrix before = layer.weights;
    add_neuron(layer);
    CHECK(layer.hidden_units() == before.cols() + 1);
    CHECK(layer.weights.leftCols(before.cols()) == before);
    CHECK(layer.weights.col(before.cols()).array().abs().maxCoeff() <= kNewWeightCap);
  }
}

TEST_CASE("hidden_distance matches the softmax-KL hand evaluation") {
  Matrix w(2, 2);
  w << std::log(2.0), 0.0, 0.0, std::log(2.0);
  const RbmLayer layer = layer_with(w);
  // softmaxes (2/3,1/3) vs (1/3,2/3); each directed KL is (1/3) ln 2
  CHECK(hidden_distance(layer, 0, 1) ==
        doctest::Approx(std::log(2.0) / 3.0).epsilon(1e-9));

  Matrix same(3, 2);
  same << 0.3, 0.3, -1.0, -1.0, 0.2, 0.2;
  CHECK(hidden_distance(layer_with(same), 0, 1) == 0.0);

  CHECK_THROWS_AS(hidden_distance(layer, 0, 5), std::invalid_argument);
}

TEST_CASE("hidden_distance is a symmetric non-negative discriminator") {
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 10000; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(uniform_below(rng, 10));
    Matrix w(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      w(i, 0) = uniform_in(rng, -3.0, 3.0);
      w(i, 1) = uniform_in(rng, -3.0, 3.0);
    }
    const RbmLayer layer = layer_with(w);
    const double d = hidden_distance(layer, 0, 1);
    CHECK(d >= 0.0);
    CHECK(hidden_distance(layer, 1, 0) == d);
    CHECK(hidden_distance(layer, 0, 0) == 0.0);
    CHECK(hidden_distance(layer, 1, 1) == 0.0);
  }
}

TEST_CASE("layer_min_distance scans every unordered pair") {
  Matrix two(2, 2);
  two << std::log(2.0), 0.0, 0.0, std::log(2.0);
  const RbmLayer pair = layer_with(two);
  CHECK(layer_min_distance(pair) == hidden_distance(pair, 0, 1));

  Matrix dup(2, 3);
  dup << 0.4, -0.2, 0.4, 0.1, 0.7, 0.1;  // columns 0 and 2 identical
  CHECK(layer_min_distance(layer_with(dup)) == 0.0);

  std::mt19937_64 rng(3);
  Matrix w(4, 3);
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) w(i, j) = uniform_in(rng, -2.0, 2.0);
  }
  const RbmLayer layer = layer_with(w);
  double brute = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < 3; ++a) {
    for (Eigen::Index b = a + 1; b < 3; ++b) brute = std::min(brute, hidden_distance(layer, a, b));
  }
  CHECK(layer_min_distance(layer) == brute);

  Matrix single(2, 1);
  single << 0.0, 0.0;
  CHECK_THROWS_AS(layer_min_distance(layer_with(single)), std::invalid_argument);
}

TEST_CASE("the layer-growth test needs a set baseline") {
  LayerGrowthState unset{0.0, 0.1};
  CHECK_FALSE(needs_new_layer(0.0001, unset));

  LayerGrowthState state{1.0, 0.1};
  CHECK(needs_new_layer(0.05, state));
  CHECK_FALSE(needs_new_layer(0.15, state));
}
