#include "bmctx/rbm.hpp"

#include <stdexcept>
#include <string>

#include "bmctx/random.hpp"

namespace bmctx {

namespace {

void check_length(const char* what, Eigen::Index got, Eigen::Index want) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + " length mismatch: got " +
                                std::to_string(got) + ", expected " + std::to_string(want));
  }
}

}  // namespace

RbmLayer::RbmLayer(Eigen::Index n_visible, Eigen::Index n_hidden, double learning_rate,
                   std::uint64_t seed, double weight_sd)
    : weights(n_visible, n_hidden), learning_rate(learning_rate), rng_seed(seed), rng(seed) {
  if (n_visible < 1 || n_hidden < 1) {
    throw std::invalid_argument("RbmLayer needs at least one visible and one hidden unit");
  }
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("learning rate must be positive");
  }
  for (Eigen::Index i = 0; i < n_visible; ++i) {
    for (Eigen::Index j = 0; j < n_hidden; ++j) {
      weights(i, j) = gaussian(rng, 0.0, weight_sd);
    }
  }
}

HiddenState hidden_activations(const RbmLayer& layer, const SceneVector& v) {
  check_length("visible input", v.size(), layer.visible_units());
  return (layer.weights.transpose() * v).unaryExpr([](double x) { return logistic(x); });
}

SceneVector visible_reconstruction(const RbmLayer& layer, const HiddenState& h) {
  check_length("hidden input", h.size(), layer.hidden_units());
  return (layer.weights * h).unaryExpr([](double x) { return logistic(x); });
}

void cd1_update(RbmLayer& layer, const SceneVector& v, const CdOptions& options) {
  check_length("visible input", v.size(), layer.visible_units());
  HiddenState h0 = hidden_activations(layer, v);
  if (options.sample_hidden) {
    for (Eigen::Index j = 0; j < h0.size(); ++j) {
      h0[j] = uniform_unit(layer.rng) < h0[j] ? 1.0 : 0.0;
    }
  }
  const SceneVector v1 = visible_reconstruction(layer, h0);
  const HiddenState h1 = hidden_activations(layer, v1);
  layer.weights += layer.learning_rate * (v * h0.transpose() - v1 * h1.transpose());
  if (!layer.weights.allFinite()) {
    throw std::runtime_error("cd1_update produced non-finite weights");
  }
}

SceneVector gibbs_reconstruct(std::span<const RbmLayer> stack, const SceneVector& v_init,
                              const std::vector<bool>& clamp_mask, int steps) {
  if (stack.empty()) {
    throw std::invalid_argument("gibbs_reconstruct needs at least one layer");
  }
  if (steps < 1) {
    throw std::invalid_argument("gibbs_reconstruct needs steps >= 1");
  }
  check_length("visible input", v_init.size(), stack.front().visible_units());
  for (std::size_t l = 1; l < stack.size(); ++l) {
    check_length("stacked layer input", stack[l].visible_units(), stack[l - 1].hidden_units());
  }
  if (!clamp_mask.empty() && static_cast<Eigen::Index>(clamp_mask.size()) != v_init.size()) {
    throw std::invalid_argument("clamp mask length does not match the visible vector");
  }

  SceneVector v = v_init;
  for (int step = 0; step < steps; ++step) {
    Eigen::VectorXd x = v;
    for (const RbmLayer& layer : stack) {
      x = hidden_activations(layer, x);
    }
    for (std::size_t l = stack.size(); l-- > 0;) {
      x = visible_reconstruction(stack[l], x);
    }
    v = x;
    if (!clamp_mask.empty()) {
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (clamp_mask[i]) v[i] = v_init[i];
      }
    }
  }
  return v.unaryExpr([](double p) { return p >= 0.5 ? 1.0 : 0.0; });
}

}  // namespace bmctx
