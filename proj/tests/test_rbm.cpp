#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bmctx/random.hpp"
#include "bmctx/rbm.hpp"

using namespace bmctx;

namespace {

RbmLayer layer_with(Matrix w, double lr = 0.1) {
  RbmLayer layer;
  layer.weights = std::move(w);
  layer.learning_rate = lr;
  return layer;
}

// Trained until the two complementary scenes become attractors; reused by the
// reconstruction regression below.
RbmLayer train_two_pattern_layer() {
  RbmLayer layer(4, 2, 0.1, 123);
  SceneVector a(4), b(4);
  a << 1, 1, 0, 0;
  b << 0, 0, 1, 1;
  for (int step = 0; step < 1000; ++step) {
    cd1_update(layer, a);
    cd1_update(layer, b);
  }
  return layer;
}

}  // namespace

TEST_CASE("hidden activations follow the logistic of the weighted sum") {
  RbmLayer zero = layer_with(Matrix::Zero(3, 2));
  SceneVector v(3);
  v << 1, 0, 1;
  const HiddenState h = hidden_activations(zero, v);
  REQUIRE(h.size() == 2);
  CHECK(h[0] == 0.5);
  CHECK(h[1] == 0.5);

  Matrix w(2, 1);
  w << 2.0, 0.0;
  RbmLayer layer = layer_with(w);
  SceneVector v1(2), v2(2);
  v1 << 1, 0;
  v2 << 0, 1;
  CHECK(hidden_activations(layer, v1)[0] == doctest::Approx(0.8807970779778823).epsilon(1e-12));
  CHECK(hidden_activations(layer, v2)[0] == 0.5);

  SceneVector bad(3);
  bad << 1, 0, 0;
  CHECK_THROWS_AS(hidden_activations(layer, bad), std::invalid_argument);
}

TEST_CASE("visible reconstruction is the symmetric counterpart") {
  Matrix w(2, 1);
  w << 2.0, 0.0;
  RbmLayer layer = layer_with(w);

  HiddenState h1(1), h0(1);
  h1 << 1;
  h0 << 0;
  const SceneVector on = visible_reconstruction(layer, h1);
  CHECK(on[0] == doctest::Approx(0.8807970779778823).epsilon(1e-12));
  CHECK(on[1] == 0.5);
  const SceneVector off = visible_reconstruction(layer, h0);
  CHECK(off[0] == 0.5);
  CHECK(off[1] == 0.5);

  HiddenState wrong(2);
  wrong << 1, 0;
  CHECK_THROWS_AS(visible_reconstruction(layer, wrong), std::invalid_argument);
}

TEST_CASE("both directions read the same weight") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    RbmLayer layer(3, 4, 0.1, rng());
    for (Eigen::Index i = 0; i < 3; ++i) {
      for (Eigen::Index j = 0; j < 4; ++j) {
        SceneVector ei = SceneVector::Zero(3);
        ei[i] = 1.0;
        HiddenState ej = HiddenState::Zero(4);
        ej[j] = 1.0;
        CHECK(hidden_activations(layer, ei)[j] == visible_reconstruction(layer, ej)[i]);
      }
    }
  }
}

TEST_CASE("cd1_update reproduces the zero-weight hand trace") {
  RbmLayer layer = layer_with(Matrix::Zero(2, 1), 0.1);
  SceneVector v(2);
  v << 1, 0;
  cd1_update(layer, v);
  // h0 = 0.5, v1 = (0.5, 0.5), h1 = 0.5: positive joints (0.5, 0), negative 0.25
  CHECK(layer.weights(0, 0) == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(layer.weights(1, 0) == doctest::Approx(-0.025).epsilon(1e-12));
}

TEST_CASE("cd1_update leaves weights alone at zero step size") {
  RbmLayer layer(3, 2, 1.0, 11);
  layer.learning_rate = 0.0;  // constructor rejects 0; the field itself may be anything
  const Matrix before = layer.weights;
  SceneVector v(3);
  v << 1, 1, 0;
  cd1_update(layer, v);
  CHECK((layer.weights.array() == before.array()).all());
}

TEST_CASE("an all-zero scene only ever weakens weights") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    RbmLayer layer(5, 3, 0.1, rng());
    const Matrix before = layer.weights;
    cd1_update(layer, SceneVector::Zero(5));
    // positive joints vanish, so every delta is -lr * <v h>^1 < 0
    CHECK((layer.weights.array() < before.array()).all());
  }
}

TEST_CASE("cd1_update is a fixed point when both phases agree") {
  RbmLayer layer = layer_with(Matrix::Zero(2, 2), 0.1);
  SceneVector v(2);
  v << 0.5, 0.5;  // reconstructs to itself under zero weights
  cd1_update(layer, v);
  CHECK((layer.weights.array() == 0.0).all());
}

TEST_CASE("activations stay strictly inside (0,1) for finite weights") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    RbmLayer layer(4, 3, 0.1, rng());
    layer.weights *= 50.0;
    SceneVector v(4);
    for (int i = 0; i < 4; ++i) v[i] = uniform_unit(rng);
    const HiddenState h = hidden_activations(layer, v);
    CHECK((h.array() > 0.0).all());
    CHECK((h.array() < 1.0).all());
  }
}

TEST_CASE("identical layer, input and seed give bit-identical updates") {
  for (bool sampled : {false, true}) {
    RbmLayer a(6, 2, 0.1, 99);
    RbmLayer b(6, 2, 0.1, 99);
    SceneVector v(6);
    v << 1, 0, 1, 1, 0, 0;
    const CdOptions opts{sampled};
    for (int step = 0; step < 25; ++step) {
      cd1_update(a, v, opts);
      cd1_update(b, v, opts);
    }
    CHECK((a.weights.array() == b.weights.array()).all());
  }
}

TEST_CASE("gibbs_reconstruct with a full clamp is the binarized identity") {
  RbmLayer layer(3, 2, 0.1, 4);
  SceneVector v(3);
  v << 1, 0, 1;
  const std::vector<bool> clamp(3, true);
  const SceneVector out = gibbs_reconstruct({&layer, 1}, v, clamp, 3);
  CHECK(out == v);
}

TEST_CASE("zero weights reconstruct to all ones under the >= 0.5 rule") {
  RbmLayer layer = layer_with(Matrix::Zero(3, 2));
  SceneVector v(3);
  v << 1, 0, 0;
  const SceneVector out = gibbs_reconstruct({&layer, 1}, v, {}, 1);
  CHECK((out.array() == 1.0).all());
}

TEST_CASE("a trained layer recovers its attractor from a fragment") {
  const RbmLayer layer = train_two_pattern_layer();
  SceneVector fragment(4);
  fragment << 1, 0, 0, 0;
  const SceneVector out = gibbs_reconstruct({&layer, 1}, fragment, {}, 5);
  SceneVector expected(4);
  expected << 1, 1, 0, 0;
  CHECK(out == expected);
}

TEST_CASE("gibbs_reconstruct validates its inputs") {
  RbmLayer layer(3, 2, 0.1, 4);
  SceneVector v(3);
  v << 1, 0, 1;
  CHECK_THROWS_AS(gibbs_reconstruct({&layer, 1}, v, {}, 0), std::invalid_argument);
  CHECK_THROWS_AS(gibbs_reconstruct({&layer, 1}, SceneVector::Zero(2), {}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(gibbs_reconstruct({&layer, 1}, v, std::vector<bool>(2, true), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(gibbs_reconstruct({}, v, {}, 1), std::invalid_argument);
}
