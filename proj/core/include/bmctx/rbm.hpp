#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace bmctx {

using Matrix = Eigen::MatrixXd;

// Bag-of-objects scene over a fixed vocabulary: {0,1} entries for raw scenes,
// [0,1] activation probabilities when a layer output is fed upward.
using SceneVector = Eigen::VectorXd;

// Hidden activation probabilities, one entry per context unit.
using HiddenState = Eigen::VectorXd;

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct CdOptions {
  bool sample_hidden = false;  // Bernoulli-sample h^0 instead of using probabilities
};

/// One visible/hidden band with symmetric weights. The weight matrix is the
/// only parameter set; there are no bias terms, which keeps the per-visible
/// confidence (row maximum) well defined.
struct RbmLayer {
  Matrix weights;  // |v| x |h|; weights(i, j) connects visible i to hidden j
  double learning_rate = 0.1;
  std::uint64_t rng_seed = 0;
  std::mt19937_64 rng{0};

  RbmLayer() = default;

  // Fresh layer: zero-mean Gaussian weights, standard deviation weight_sd,
  // drawn row by row from a generator seeded with `seed`.
  RbmLayer(Eigen::Index n_visible, Eigen::Index n_hidden, double learning_rate,
           std::uint64_t seed, double weight_sd = 0.01);

  Eigen::Index visible_units() const { return weights.rows(); }
  Eigen::Index hidden_units() const { return weights.cols(); }
};

/// Positive-phase activation: h_j = logistic(sum_i w_ij v_i). Deterministic.
HiddenState hidden_activations(const RbmLayer& layer, const SceneVector& v);

/// Negative-phase counterpart: v_i = logistic(sum_j w_ij h_j), same weights.
SceneVector visible_reconstruction(const RbmLayer& layer, const HiddenState& h);

/// One CD-1 step: positive phase from v, negative phase from the mean-field
/// reconstruction, then w_ij += lr * (<v_i h_j>^0 - <v_i h_j>^1). The phases
/// use probabilities, not samples, unless options.sample_hidden is set.
void cd1_update(RbmLayer& layer, const SceneVector& v, const CdOptions& options = {});

/// Runs `steps` mean-field up-down passes through the whole stack starting
/// from v_init. After every downward pass, positions with clamp_mask true are
/// reset to v_init (pass an empty mask to leave everything free). The final
/// visible vector is thresholded at >= 0.5 to binary.
SceneVector gibbs_reconstruct(std::span<const RbmLayer> stack, const SceneVector& v_init,
                              const std::vector<bool>& clamp_mask, int steps);

}  // namespace bmctx
